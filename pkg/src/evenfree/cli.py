"""Command-line entry point.

Exit codes: 0 success or verified, 1 property fails or witness found,
2 usage or precondition error, 3 budget exhausted.  Data goes to stdout
(or ``-o``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .compose import compose_dm, compose_oa, compose_odd_prime, compose_sts
from .construct import (
    ag_packing,
    bose,
    dm_product,
    oa_odd_prime,
    oa_prime_power,
    singer_pg,
    vandermonde_dm,
)
from .core import cyclic_rep_indices
from .io import (
    DM_FORMAT,
    OA_FORMAT,
    SEARCH_FORMAT,
    DesignDocument,
    DocumentError,
    dm_from_dict,
    dm_to_dict,
    dumps,
    export_blocks,
    export_ooc,
    export_orbits,
    load_system,
    oa_from_dict,
    oa_to_dict,
    provenance,
    read_document,
)
from .search import TIMEOUT, SearchSpec, search_difference_family
from .verify import (
    BudgetExhausted,
    brute_force_even_minimum,
    check_difference_coverage,
    check_dm,
    check_oa,
    check_steiner,
    even_freeness,
    find_generalized_pasch,
    two_orbit_witness,
)

log = logging.getLogger("evenfree")

OK, FAIL, USAGE, BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 60.0


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _design_doc(path: str) -> DesignDocument:
    return DesignDocument.from_dict(read_document(path))


def _expect(doc: dict, fmt: str, path: str) -> dict:
    if doc.get("format") != fmt:
        raise DocumentError(f"{path}: expected format {fmt!r}, got {doc.get('format')!r}")
    return doc


# ---------------------------------------------------------------- construct


def _cmd_construct(args) -> int:
    what = args.what
    if what in ("bose", "pg", "ag"):
        if what == "bose":
            d, params = bose(args.x), {"x": args.x}
        elif what == "pg":
            d, params = singer_pg(args.m, args.q), {"m": args.m, "q": args.q}
        else:
            d, params = ag_packing(args.m, args.q), {"m": args.m, "q": args.q}
        doc = DesignDocument(d, provenance(what, params))
        _emit(dumps(doc.to_dict()), args.output)
        return OK
    if what == "dm":
        m = vandermonde_dm(args.v, args.k)
        _emit(dumps(dm_to_dict(m, provenance("vandermonde_dm", {"v": args.v, "k": args.k}))), args.output)
        return OK
    if what == "dm-product":
        da = _expect(read_document(args.a), DM_FORMAT, args.a)
        db = _expect(read_document(args.b), DM_FORMAT, args.b)
        m = dm_product(dm_from_dict(da), dm_from_dict(db))
        prov = provenance("dm_product", {}, [da["digest"], db["digest"]])
        _emit(dumps(dm_to_dict(m, prov)), args.output)
        return OK
    if what == "oa":
        if args.k is not None:
            a, prov = oa_odd_prime(args.k), provenance("oa_odd_prime", {"k": args.k})
        else:
            a, prov = oa_prime_power(args.q), provenance("oa_prime_power", {"q": args.q})
        _emit(dumps(oa_to_dict(a, prov)), args.output)
        return OK
    raise UsageError(f"unknown construction {what!r}")


# ---------------------------------------------------------------- compose


def _cmd_compose(args) -> int:
    first, second = _design_doc(args.first), _design_doc(args.second)
    ingredients = [first.digest, second.digest]
    bv, cw = first.design, second.design
    if args.how == "dm":
        raw = _expect(read_document(args.dm), DM_FORMAT, args.dm)
        out = compose_dm(bv, cw, dm_from_dict(raw), trust=args.trust)
        ingredients.append(raw["digest"])
    elif args.how == "oa":
        raw = _expect(read_document(args.oa), OA_FORMAT, args.oa)
        out = compose_oa(bv, cw, oa_from_dict(raw), trust=args.trust)
        ingredients.append(raw["digest"])
    elif args.how == "odd-prime":
        out = compose_odd_prime(bv, cw, trust=args.trust)
    else:
        out = compose_sts(bv, cw, trust=args.trust)
    for note in out.notes:
        log.warning("%s", note)
    doc = DesignDocument(out, provenance(f"compose_{args.how}", {"trust": args.trust}, ingredients))
    _emit(dumps(doc.to_dict()), args.output)
    return OK


# ---------------------------------------------------------------- verify


def _report(check: str, ok: bool, message: str = "", **extra) -> str:
    return json.dumps({"check": check, "ok": ok, "message": message, **extra}) + "\n"


def _revalidate(dd: DesignDocument | None, prop: str, bound: int | None, verdict: bool) -> None:
    if dd is None:
        return
    cert = dd.cached(prop, bound)
    if cert is None:
        return
    if cert.get("digest") != dd.digest:
        log.warning("cached %s certificate refers to other content; ignored", prop)
    elif cert.get("verdict") != verdict:
        log.warning("cached %s certificate says %s, recomputation says %s; cached value ignored",
                    prop, cert.get("verdict"), verdict)


def _cmd_verify(args) -> int:
    path = args.file
    doc = read_document(path)
    check = args.check
    if check == "dm":
        res = check_dm(dm_from_dict(_expect(doc, DM_FORMAT, path)))
        sys.stdout.write(_report(check, res.ok, res.message))
        return OK if res else FAIL
    if check == "oa":
        res = check_oa(oa_from_dict(_expect(doc, OA_FORMAT, path)))
        classes = [list(c) for c in res.data.get("parallel_classes", [])]
        sys.stdout.write(_report(check, res.ok, res.message, parallel_classes=classes))
        return OK if res else FAIL

    s, dd = load_system(doc)
    bound: int | None = None
    if check == "steiner":
        res = check_steiner(s)
        ok, payload = res.ok, {"message": res.message}
    elif check == "cyclic":
        if dd is not None and dd.design.kind == "design":
            res = check_difference_coverage(dd.design)
            ok, payload = res.ok, {"message": res.message}
        else:
            # a set-system or packing is cyclic iff its block set is translation-closed
            ok = cyclic_rep_indices(s) is not None
            payload = {"message": "" if ok else "block set is not closed under translation"}
    elif check == "even-free":
        bound = args.r
        if args.oracle:
            w = brute_force_even_minimum(s)
            witness = w if w is not None and len(w) <= args.r else None
        else:
            try:
                witness = even_freeness(s, args.r, budget=args.budget).minimal_witness
            except BudgetExhausted as exc:
                log.error("budget of %ss exhausted; certified %d-even-free", args.budget, exc.certified)
                sys.stdout.write(_report(check, False, "budget exhausted", certified=exc.certified))
                return BUDGET
        ok = witness is None
        payload = {"r": args.r}
        if witness is not None:
            payload["witness"] = list(witness.indices)
            payload["blocks"] = [list(b) for b in witness.blocks(s)]
    elif check == "pasch":
        witness = find_generalized_pasch(s)
        ok = witness is None
        payload = {}
        if witness is not None:
            payload = {"witness": list(witness.indices), "blocks": [list(b) for b in witness.blocks(s)]}
    elif check == "witness-2k":
        if dd is None:
            raise UsageError("witness-2k needs a cyclic-design document")
        w = two_orbit_witness(dd.design)
        assert w.is_valid_in(s)
        ok = False
        payload = {"witness": list(w.indices), "blocks": [list(b) for b in w.blocks(s)]}
    else:
        raise UsageError(f"unknown check {check!r}")

    message = payload.pop("message", "")
    _revalidate(dd, check, bound, ok)
    sys.stdout.write(_report(check, ok, message, **payload))
    if args.record:
        if dd is None:
            raise UsageError("--record needs a cyclic-design document")
        Path(path).write_text(dumps(dd.with_certificate(check, bound, ok).to_dict()))
    return OK if ok else FAIL


# ---------------------------------------------------------------- search


def _cmd_search(args) -> int:
    spec = SearchSpec(args.v, args.k, args.r, args.limit, args.budget, args.reduce)
    res = search_difference_family(spec)
    doc = {
        "format": SEARCH_FORMAT,
        "v": spec.v,
        "k": spec.k,
        "r": spec.r,
        "status": res.status,
        "complete": res.complete,
        "nodes": res.nodes,
        "designs": [
            DesignDocument(d, provenance("search", {"v": spec.v, "k": spec.k, "r": spec.r})).to_dict()
            for d in res
        ],
    }
    _emit(dumps(doc), args.output)
    log.info("%s: %d design(s), %d nodes", res.status, len(res), res.nodes)
    if res.status == TIMEOUT:
        log.error("search budget exhausted after %d nodes", res.nodes)
        return BUDGET
    return OK


# ---------------------------------------------------------------- export


def _cmd_export(args) -> int:
    doc = read_document(args.file)
    s, dd = load_system(doc)
    if args.format == "blocks":
        text = export_blocks(s)
    else:
        if dd is None:
            raise UsageError(f"--format {args.format} needs a cyclic-design document")
        if args.format == "orbits":
            text = export_orbits(dd.design)
        else:
            text = "".join(" ".join(map(str, c)) + "\n" for c in export_ooc(dd.design))
    _emit(text, args.output)
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evenfree", description="Cyclic even-free Steiner 2-designs.", allow_abbrev=False)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="direct constructions")
    csub = con.add_subparsers(dest="what", required=True)
    c = csub.add_parser("bose", help="Bose triple system of order 3x")
    c.add_argument("--x", type=int, required=True)
    for name, helptext in (("pg", "Singer design of PG(m,q)"), ("ag", "affine-geometry cyclic packing")):
        c = csub.add_parser(name, help=helptext)
        c.add_argument("--m", type=int, required=True)
        c.add_argument("--q", type=int, required=True)
    c = csub.add_parser("dm", help="Vandermonde difference matrix over Z_v")
    c.add_argument("--v", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c = csub.add_parser("dm-product", help="product of two difference matrices")
    c.add_argument("a")
    c.add_argument("b")
    c = csub.add_parser("oa", help="OA(k,k) for odd prime k or OA(q+1,q) over GF(q)")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--q", type=int)
    for c in csub.choices.values():
        c.add_argument("-o", "--output")

    com = sub.add_parser("compose", help="recursive product constructions")
    msub = com.add_subparsers(dest="how", required=True)
    for name in ("dm", "oa", "odd-prime", "sts3"):
        c = msub.add_parser(name)
        c.add_argument("first")
        c.add_argument("second")
        if name == "dm":
            c.add_argument("--dm", required=True, help="difference-matrix document")
        if name == "oa":
            c.add_argument("--oa", required=True, help="orthogonal-array document")
        c.add_argument("--trust", action="store_true", help="skip re-verifying ingredient even-freeness")
        c.add_argument("-o", "--output")

    ver = sub.add_parser("verify", help="check a property")
    vsub = ver.add_subparsers(dest="check", required=True)
    for name in ("steiner", "cyclic", "dm", "oa", "even-free", "pasch", "witness-2k"):
        c = vsub.add_parser(name)
        if name == "even-free":
            c.add_argument("--r", type=int, required=True)
            c.add_argument("--oracle", action="store_true", help="exhaustive subset enumeration (at most 26 blocks)")
        c.add_argument("file")
        c.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="seconds (default 60)")
        c.add_argument("--record", action="store_true", help="store the verdict as a cached certificate")

    s = sub.add_parser("search", help="difference-family backtracking")
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--limit", type=int)
    s.add_argument("--budget", type=float)
    s.add_argument("--reduce", action="store_true", help="one design per multiplier class")
    s.add_argument("-o", "--output")

    e = sub.add_parser("export", help="plain-text exports")
    e.add_argument("file")
    e.add_argument("--format", choices=("blocks", "orbits", "ooc"), required=True)
    e.add_argument("-o", "--output")
    return p


COMMANDS = {
    "construct": _cmd_construct,
    "compose": _cmd_compose,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError) as exc:
        # DesignError, ConstructionError, CompositionError and DocumentError are ValueErrors
        log.error("%s", exc)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
