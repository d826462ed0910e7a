"""Command-line front end: a thin client of the workbench service.

Without --server the requests are dispatched to an in-process instance of
the FastAPI app; with --server URL they go over the wire.  Exit codes:
0 success / verified, 1 verification failure, 2 invalid input or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional


def _client(server: Optional[str]):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=1800.0)
    from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _post(client, path, payload):
    resp = client.post(path, json=payload)
    if resp.status_code >= 500:
        print(f"error: service failure: {resp.text}", file=sys.stderr)
        sys.exit(2)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text)
        print(f"error: {detail}", file=sys.stderr)
        sys.exit(2)
    return resp.json()


def _load_pair(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read pair file {path}: {exc}", file=sys.stderr)
        sys.exit(2)


def _emit(data, out: Optional[str]):
    text = json.dumps(data, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qtoda",
        description="Exact workbench for modified quantum difference Toda "
                    "systems (thin client of the bundled service).")
    parser.add_argument("--server", help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", help="build a first hamiltonian")
    p.add_argument("--type", required=True, help='root system tag, e.g. "C2"')
    p.add_argument("--pair", help="pair JSON file (closed/generic modes)")
    p.add_argument("--generic", action="store_true",
                   help="use the R-matrix recipe instead of the closed form")
    p.add_argument("--closed", action="store_true")
    p.add_argument("--standard", action="store_true",
                   help="standard q-Toda specialization")
    p.add_argument("--affine", action="store_true")
    p.add_argument("--kappa", help="affine deformation parameter (scalar text)")
    p.add_argument("--format", choices=("json", "latex", "text"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("lax", help="monodromy hamiltonians and checks")
    p.add_argument("--type", default="A", help='"A" or "C"')
    p.add_argument("--rank", type=int, required=True, help="number of sites")
    p.add_argument("--k", required=True, help="comma-separated k-vector")
    p.add_argument("--periodic", help="periodic deformation parameter")
    p.add_argument("--check", default="", help="comma list: rtt,commute")
    p.add_argument("--out")

    p = sub.add_parser("whittaker", help="Whittaker pairing coefficients")
    psub = p.add_subparsers(dest="wcommand")
    pe = psub.add_parser("eigencheck", help="eigenfunction identity check")
    pe.add_argument("--type", required=True)
    pe.add_argument("--pair", required=True)
    pe.add_argument("--degree", type=int, default=3)
    p.add_argument("--type")
    p.add_argument("--pair")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--route", choices=("recursive", "closed", "oracle"),
                   default="recursive")
    p.add_argument("--out")

    p = sub.add_parser("laumon", help="geometric oracle checks")
    p.add_argument("--rank", type=int, required=True, help="n of sl_n")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--check", default="relations,whittaker,dj")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("conjugate", help="solve a twist between two pairs")
    p.add_argument("--type", required=True)
    p.add_argument("--pairA", required=True)
    p.add_argument("--pairB", required=True)
    p.add_argument("--verify-all", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--type")
    p.add_argument("--family")
    p.add_argument("--rank", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    args = parser.parse_args(argv)
    client = _client(args.server)

    if args.command == "hamiltonian":
        mode = "closed"
        if args.generic:
            mode = "generic"
        if args.standard:
            mode = "standard"
        if args.affine:
            mode = "affine"
        payload = {"type": args.type, "mode": mode, "format": args.format}
        if args.pair:
            payload["pair"] = _load_pair(args.pair)
        if args.kappa:
            payload["kappa"] = args.kappa
        data = _post(client, "/hamiltonian", payload)
        _emit(data, args.out)
        return 0

    if args.command == "lax":
        try:
            kvec = [int(x) for x in args.k.split(",") if x != ""]
        except ValueError:
            print("error: bad k-vector", file=sys.stderr)
            return 2
        payload = {"family": args.type, "rank": args.rank, "k": kvec,
                   "checks": [c for c in args.check.split(",") if c]}
        if args.periodic:
            payload["periodic_eps"] = args.periodic
        data = _post(client, "/lax", payload)
        _emit(data, args.out)
        failed = any(data.get(c) is False for c in ("rtt", "commute"))
        return 1 if failed or not data["h2_matches_formula"] else 0

    if args.command == "whittaker":
        if args.wcommand == "eigencheck":
            payload = {"type": args.type, "pair": _load_pair(args.pair),
                       "degree": args.degree}
            data = _post(client, "/whittaker/eigencheck", payload)
            _emit(data, None)
            return 0 if data["ok"] else 1
        if not args.type or not args.pair:
            print("error: --type and --pair are required", file=sys.stderr)
            return 2
        payload = {"type": args.type, "pair": _load_pair(args.pair),
                   "degree": args.degree, "route": args.route}
        data = _post(client, "/whittaker", payload)
        _emit(data, args.out)
        return 0

    if args.command == "laumon":
        payload = {"rank": args.rank, "degree": args.degree,
                   "checks": [c for c in args.check.split(",") if c],
                   "seed": args.seed}
        data = _post(client, "/laumon", payload)
        _emit(data, args.out)
        return 0 if data["ok"] else 1

    if args.command == "conjugate":
        payload = {"type": args.type, "pairA": _load_pair(args.pairA),
                   "pairB": _load_pair(args.pairB),
                   "verify_all": args.verify_all}
        resp = client.post("/conjugate", json=payload)
        if resp.status_code == 409:
            print(f"not conjugate: {resp.json()['detail']}", file=sys.stderr)
            return 1
        if resp.status_code >= 400:
            print(f"error: {resp.json().get('detail', resp.text)}",
                  file=sys.stderr)
            return 2
        _emit(resp.json(), args.out)
        return 0

    if args.command == "verify":
        payload = {"suite": args.suite, "seed": args.seed}
        for key in ("type", "family", "rank", "degree", "trials"):
            val = getattr(args, key)
            if val is not None:
                payload[key] = val
        data = _post(client, "/verify", payload)
        _emit(data, args.out)
        for check in data["checks"]:
            mark = "ok" if check["ok"] else "FAIL"
            print(f"[{mark}] {check['name']}", file=sys.stderr)
        return 0 if data["ok"] else 1

    return 2


if __name__ == "__main__":
    sys.exit(main())
