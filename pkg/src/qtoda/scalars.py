"""Exact scalar arithmetic.

Multivariate Laurent polynomials over the rationals and their fraction field.
A :class:`ScalarField` fixes a tuple of symbols whose first entry is the
deformation symbol ``q``; the quantum parameter is ``v = q**qscale``, so that
all ``v``-powers with denominator dividing ``qscale`` have integer
``q``-exponents.  Everything is immutable and canonicalized, so ``==`` is
exact mathematical equality.

Polynomials are stored sparsely as ``{exponent_tuple: Fraction}``; fractions
are kept gcd-reduced with a monic (lex-leading) denominator and no negative
exponents shared between numerator and denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

try:  # mature sparse-polynomial gcd; the PRS fallback below is kept honest
    from sympy import QQ as _SYMPY_QQ
    from sympy.polys import rings as _SYMPY_RINGS
except Exception:  # pragma: no cover
    _SYMPY_QQ = None
    _SYMPY_RINGS = None

Monomial = Tuple[int, ...]
PolyDict = Dict[Monomial, Fraction]

_SYMPY_RING_CACHE: Dict[int, object] = {}


def _sympy_ring(nvars: int):
    ring = _SYMPY_RING_CACHE.get(nvars)
    if ring is None:
        ring = _SYMPY_RINGS.ring([f"x{i}" for i in range(nvars)], _SYMPY_QQ)[0]
        _SYMPY_RING_CACHE[nvars] = ring
    return ring


def _pgcd_sympy(a: "PolyDict", b: "PolyDict", nvars: int) -> "PolyDict":
    ring = _sympy_ring(nvars)
    fa = ring.from_dict({m: _SYMPY_QQ(c.numerator, c.denominator)
                         for m, c in a.items()})
    fb = ring.from_dict({m: _SYMPY_QQ(c.numerator, c.denominator)
                         for m, c in b.items()})
    g = fa.gcd(fb)
    out = {tuple(m): Fraction(int(c.numerator), int(c.denominator))
           for m, c in g.to_dict().items()}
    return _pmonic(out)


# ---------------------------------------------------------------------------
# raw polynomial-dict helpers
# ---------------------------------------------------------------------------

def _pclean(p: PolyDict) -> PolyDict:
    return {m: c for m, c in p.items() if c}


def _padd(a: PolyDict, b: PolyDict) -> PolyDict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pneg(a: PolyDict) -> PolyDict:
    return {m: -c for m, c in a.items()}


def _pmul(a: PolyDict, b: PolyDict) -> PolyDict:
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    out: PolyDict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pscale(a: PolyDict, c: Fraction) -> PolyDict:
    if not c:
        return {}
    return {m: x * c for m, x in a.items()}


def _pshift(a: PolyDict, shift: Monomial) -> PolyDict:
    return {tuple(x + y for x, y in zip(m, shift)): c for m, c in a.items()}


def _pminexp(polys: Iterable[PolyDict], nvars: int) -> Monomial:
    mins = None
    for p in polys:
        for m in p:
            if mins is None:
                mins = list(m)
            else:
                mins = [min(x, y) for x, y in zip(mins, m)]
    return tuple(mins) if mins is not None else (0,) * nvars


def _plead(a: PolyDict) -> Monomial:
    return max(a)


def _degree(a: PolyDict, var: int) -> int:
    return max(m[var] for m in a) if a else -1


def _main_var(a: PolyDict, b: PolyDict, nvars: int) -> int:
    """Last variable occurring with positive degree in a or b, else -1."""
    for var in range(nvars - 1, -1, -1):
        if (a and _degree(a, var) > 0) or (b and _degree(b, var) > 0):
            return var
    return -1


def _to_univ(a: PolyDict, var: int) -> Dict[int, PolyDict]:
    """View as univariate in ``var`` with PolyDict coefficients (var dropped)."""
    out: Dict[int, PolyDict] = {}
    for m, c in a.items():
        d = m[var]
        rest = m[:var] + (0,) + m[var + 1:]
        out.setdefault(d, {})[rest] = c
    return out


def _from_univ(u: Dict[int, PolyDict], var: int) -> PolyDict:
    out: PolyDict = {}
    for d, coeff in u.items():
        for m, c in coeff.items():
            out[m[:var] + (d,) + m[var + 1:]] = c
    return out


def _pdivexact(a: PolyDict, b: PolyDict) -> PolyDict:
    """Exact division a / b; raises ArithmeticError when not exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    if len(b) == 1:
        (mb, cb), = b.items()
        return {tuple(x - y for x, y in zip(m, mb)): c / cb for m, c in a.items()}
    rem = dict(a)
    quo: PolyDict = {}
    mb = _plead(b)
    cb = b[mb]
    while rem:
        ma = _plead(rem)
        mq = tuple(x - y for x, y in zip(ma, mb))
        if any(e < 0 for e in mq):
            raise ArithmeticError("inexact polynomial division")
        cq = rem[ma] / cb
        quo[mq] = quo.get(mq, 0) + cq
        rem = _padd(rem, _pmul({mq: -cq}, b))
    return _pclean(quo)


def _univ_prem(a: Dict[int, PolyDict], b: Dict[int, PolyDict]) -> Dict[int, PolyDict]:
    """Pseudo-remainder of univariate polys with PolyDict coefficients."""
    da, db = max(a), max(b)
    lb = b[db]
    rem = {d: dict(c) for d, c in a.items()}
    while rem and max(rem) >= db:
        dr = max(rem)
        lr = rem[dr]
        new: Dict[int, PolyDict] = {}
        for d, c in rem.items():
            if d != dr:
                new[d] = _pmul(c, lb)
        for d, c in b.items():
            if d != db:
                dd = d + dr - db
                new[dd] = _padd(new.get(dd, {}), _pneg(_pmul(c, lr)))
        rem = {d: c for d, c in new.items() if c}
    return rem


def _pgcd(a: PolyDict, b: PolyDict, nvars: int) -> PolyDict:
    """gcd of ordinary (non-negative exponent) polynomials over Q, monic-lex."""
    if not a and not b:
        return {}
    if not a:
        return _pmonic(b)
    if not b:
        return _pmonic(a)
    if len(a) == 1 or len(b) == 1:
        ma = _pminexp([a], nvars)
        mb = _pminexp([b], nvars)
        g = tuple(min(x, y) for x, y in zip(ma, mb))
        return {g: Fraction(1)}
    if _SYMPY_RINGS is not None:
        return _pgcd_sympy(a, b, nvars)
    return _pgcd_prs(a, b, nvars)


def _pgcd_prs(a: PolyDict, b: PolyDict, nvars: int) -> PolyDict:
    """Primitive pseudo-remainder sequence fallback (correct but slow on
    larger multivariate inputs)."""
    var = _main_var(a, b, nvars)
    if var < 0:
        return {(0,) * nvars: Fraction(1)}
    ua, ub = _to_univ(a, var), _to_univ(b, var)
    conta = _content(ua, nvars)
    contb = _content(ub, nvars)
    ppa = {d: _pdivexact(c, conta) for d, c in ua.items()}
    ppb = {d: _pdivexact(c, contb) for d, c in ub.items()}
    if max(ppa) < max(ppb):
        ppa, ppb = ppb, ppa
    while ppb:
        rem = _univ_prem(ppa, ppb)
        ppa = ppb
        if rem:
            cr = _content(rem, nvars)
            rem = {d: _pdivexact(c, cr) for d, c in rem.items()}
        ppb = rem
    contg = _pgcd_prs(conta, contb, nvars)
    g = _pmul(_from_univ(ppa, var), contg)
    return _pmonic(g)


def _content(u: Dict[int, PolyDict], nvars: int) -> PolyDict:
    coeffs = list(u.values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = _pgcd_prs(g, c, nvars)
        if len(g) == 1 and not any(_plead(g)) and g[_plead(g)] == 1:
            break
    return _pmonic(g)


def _pmonic(a: PolyDict) -> PolyDict:
    if not a:
        return {}
    c = a[_plead(a)]
    if c == 1:
        return dict(a)
    return {m: x / c for m, x in a.items()}


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class ScalarField:
    """Fraction field of Laurent polynomials in ``symbols`` over Q.

    ``symbols[0]`` must be the deformation symbol ``q``; ``qscale`` is the
    integer M with ``v = q**M``, chosen per root system as twice the smallest
    N with (P,P) in (1/N)Z.
    """

    def __init__(self, symbols: Iterable[str] = ("q",), qscale: int = 2):
        symbols = tuple(symbols)
        if not symbols or symbols[0] != "q":
            raise ValueError("first symbol must be the deformation symbol 'q'")
        if len(set(symbols)) != len(symbols):
            raise ValueError("symbol names must be unique")
        if qscale <= 0 or qscale % 2:
            raise ValueError("qscale must be a positive even integer")
        self.symbols = symbols
        self.index = {s: i for i, s in enumerate(symbols)}
        self.nvars = len(symbols)
        self.qscale = qscale
        self._zero_mon = (0,) * self.nvars

    def __repr__(self):
        return f"ScalarField({', '.join(self.symbols)}; v=q^{self.qscale})"

    def __eq__(self, other):
        return (isinstance(other, ScalarField)
                and self.symbols == other.symbols and self.qscale == other.qscale)

    def __hash__(self):
        return hash((self.symbols, self.qscale))

    # -- constructors -------------------------------------------------------

    def zero(self) -> "Scalar":
        return Scalar(self, {}, {self._zero_mon: Fraction(1)}, _normal=True)

    def one(self) -> "Scalar":
        return self.rational(1)

    def rational(self, x) -> "Scalar":
        x = Fraction(x)
        num = {self._zero_mon: x} if x else {}
        return Scalar(self, num, {self._zero_mon: Fraction(1)}, _normal=True)

    def symbol(self, name: str, power: int = 1) -> "Scalar":
        return self.monomial({name: power})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "Scalar":
        coeff = Fraction(coeff)
        if not coeff:
            return self.zero()
        mon = [0] * self.nvars
        for name, e in exps.items():
            mon[self.index[name]] += int(e)
        return Scalar(self, {tuple(mon): coeff}, {self._zero_mon: Fraction(1)},
                      _normal=True)

    # -- q / v combinatorics -------------------------------------------------

    def q_power(self, e: int) -> "Scalar":
        return self.monomial({"q": e})

    def v_power(self, r) -> "Scalar":
        """v**r as a Scalar; r may be rational provided qscale*r is integral."""
        e = Fraction(r) * self.qscale
        if e.denominator != 1:
            raise ValueError(f"v^{r} is not representable at qscale {self.qscale}")
        return self.q_power(int(e))

    def q_number(self, r: int, s=1) -> "Scalar":
        """[r] at v**s, as a Laurent polynomial (no division)."""
        if r < 0:
            return -self.q_number(-r, s)
        terms = self.zero()
        for j in range(r):
            terms = terms + self.v_power(Fraction(s) * (r - 1 - 2 * j))
        return terms

    def q_factorial(self, r: int, s=1) -> "Scalar":
        out = self.one()
        for k in range(1, r + 1):
            out = out * self.q_number(k, s)
        return out

    def q_binomial(self, m: int, r: int, s=1) -> "Scalar":
        if not 0 <= r <= m:
            raise ValueError("q_binomial requires 0 <= r <= m")
        return self.q_factorial(m, s) / (self.q_factorial(r, s)
                                         * self.q_factorial(m - r, s))

    def exp_series_coeff(self, r: int, s=1) -> "Scalar":
        """1/(r)_{v^s}! -- the x^r coefficient of the q-exponential at v**s."""
        if r < 0:
            raise ValueError("r must be nonnegative")
        fact = self.one()
        for k in range(1, r + 1):
            term = self.zero()
            for j in range(k):
                term = term + self.v_power(Fraction(s) * j)
            fact = fact * term
        return self.one() / fact

    def q_pochhammer(self, r: int, s=1) -> "Scalar":
        """(t;t)_r at t = v**s, i.e. prod_{k=1..r} (1 - v^{sk})."""
        out = self.one()
        for k in range(1, r + 1):
            out = out * (self.one() - self.v_power(Fraction(s) * k))
        return out

    def parse(self, text: str) -> "Scalar":
        return _parse(self, text)


class Scalar:
    """Element of the fraction field of a :class:`ScalarField`."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: ScalarField, num: PolyDict, den: PolyDict,
                 _normal: bool = False):
        self.field = field
        if _normal:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize(field, num, den)
        self._hash = None

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError("scalars from different fields")
            return other
        return self.field.rational(other)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self == self.field.one()

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return Scalar(self.field, _padd(self.num, other.num), dict(self.den))
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar(self.field, num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, _pneg(self.num), dict(self.den), _normal=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Scalar(self.field, _pmul(self.num, other.num),
                      _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.num:
            raise ZeroDivisionError("scalar division by zero")
        return Scalar(self.field, _pmul(self.num, other.den),
                      _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            if not self.num:
                raise ZeroDivisionError("zero scalar has no negative powers")
            base = Scalar(self.field, dict(self.den), dict(self.num))
            e = -e
        else:
            base = self
        out = self.field.one()
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = self._coerce(other)
            except (ValueError, TypeError):
                return NotImplemented
        return (self.field == other.field and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()),
                               frozenset(self.den.items())))
        return self._hash

    # -- substitution --------------------------------------------------------

    def substitute(self, mapping: Mapping[str, "Scalar"]) -> "Scalar":
        """Replace symbols by scalars (values must be invertible where raised
        to negative powers); unmentioned symbols stay fixed."""
        f = self.field
        cache: Dict[str, Scalar] = {}

        def base(name):
            if name not in cache:
                val = mapping.get(name)
                cache[name] = val if val is not None else f.symbol(name)
            return cache[name]

        def eval_poly(p: PolyDict) -> Scalar:
            total = f.zero()
            for mon, c in p.items():
                term = f.rational(c)
                for i, e in enumerate(mon):
                    if e:
                        term = term * base(f.symbols[i]) ** e
                total = total + term
            return total

        return eval_poly(self.num) / eval_poly(self.den)

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        """Evaluate at rational points for all symbols."""
        def ev(p: PolyDict) -> Fraction:
            t = Fraction(0)
            for mon, c in p.items():
                x = c
                for i, e in enumerate(mon):
                    if e:
                        x *= Fraction(values[self.field.symbols[i]]) ** e
                t += x
            return t
        return ev(self.num) / ev(self.den)

    # -- text form -----------------------------------------------------------

    def __repr__(self):
        return self.to_text()

    def to_text(self) -> str:
        num = _poly_text(self.field, self.num)
        if self.den == {self.field._zero_mon: Fraction(1)}:
            return num
        return f"({num})/({_poly_text(self.field, self.den)})"


def _normalize(field: ScalarField, num: PolyDict, den: PolyDict):
    """Canonical form: numerator is a Laurent dict; denominator is an ordinary
    polynomial, monic in its lex-leading term, with zero per-variable minimal
    exponent, and coprime to the numerator's polynomial part."""
    num = _pclean(num)
    den = _pclean(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, {field._zero_mon: Fraction(1)}
    dmin = _pminexp([den], field.nvars)
    if any(dmin):
        neg = tuple(-s for s in dmin)
        num = _pshift(num, neg)
        den = _pshift(den, neg)
    if len(den) == 1:
        c = den[field._zero_mon]
        if c != 1:
            num = {m: x / c for m, x in num.items()}
        return num, {field._zero_mon: Fraction(1)}
    nmin = _pminexp([num], field.nvars)
    negs = tuple(min(0, e) for e in nmin)
    numpoly = _pshift(num, tuple(-e for e in negs)) if any(negs) else num
    g = _pgcd(numpoly, den, field.nvars)
    if g and (len(g) > 1 or any(_plead(g))):
        numpoly = _pdivexact(numpoly, g)
        den = _pdivexact(den, g)
    if len(den) == 1:
        c = den[field._zero_mon]
        num = _pshift(numpoly, negs) if any(negs) else numpoly
        if c != 1:
            num = {m: x / c for m, x in num.items()}
        return num, {field._zero_mon: Fraction(1)}
    c = den[_plead(den)]
    if c != 1:
        numpoly = {m: x / c for m, x in numpoly.items()}
        den = {m: x / c for m, x in den.items()}
    num = _pshift(numpoly, negs) if any(negs) else numpoly
    return num, den


def _poly_text(field: ScalarField, p: PolyDict) -> str:
    if not p:
        return "0"
    parts = []
    for mon in sorted(p, reverse=True):
        c = p[mon]
        factors = []
        for i, e in enumerate(mon):
            if e == 0:
                continue
            s = field.symbols[i]
            factors.append(s if e == 1 else f"{s}^{e}")
        if not factors:
            body = str(abs(c))
        else:
            prefix = "" if abs(c) == 1 else f"{abs(c)}*"
            body = prefix + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# parser for the canonical text form (general +,-,*,/,^ expressions)
# ---------------------------------------------------------------------------

def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("sym", text[i:j]))
            i = j
        else:
            raise ValueError(f"unexpected character {ch!r} in scalar text")
    return tokens


def _parse(field: ScalarField, text: str) -> Scalar:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_expr() -> Scalar:
        if peek() == "-":
            take()
            out = -parse_term()
        else:
            out = parse_term()
        while peek() in ("+", "-"):
            op = take()
            t = parse_term()
            out = out + t if op == "+" else out - t
        return out

    def parse_term() -> Scalar:
        out = parse_factor()
        while peek() in ("*", "/"):
            op = take()
            f = parse_factor()
            out = out * f if op == "*" else out / f
        return out

    def parse_factor() -> Scalar:
        if peek() == "-":
            take()
            return -parse_factor()
        atom = parse_atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            e = take()
            if not isinstance(e, int):
                raise ValueError("exponent must be an integer")
            return atom ** (sign * e)
        return atom

    def parse_atom() -> Scalar:
        tok = take()
        if tok == "(":
            out = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return out
        if isinstance(tok, int):
            return field.rational(tok)
        if isinstance(tok, tuple) and tok[0] == "sym":
            name = tok[1]
            if name not in field.index:
                raise ValueError(f"unknown symbol {name!r}")
            return field.symbol(name)
        raise ValueError(f"unexpected token {tok!r}")

    out = parse_expr()
    if pos != len(tokens):
        raise ValueError("trailing input in scalar text")
    return out
