"""Command-line front end: build groups, inspect automorphisms, compute
twisted data, run verification suites, and administer the enumeration cache.

Exit codes: 0 all assertions passed, 1 at least one asserted claim failed,
2 usage or construction error, 3 exhausted budget / incomplete / corrupt
cache entry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import automorphisms as am
from . import catalog as cat
from . import groups as gr
from . import twisted as tw
from . import verify as vf
from .automorphisms import CacheCorrupt
from .groups import BudgetError, ConstructionError, UsageError

CACHE_ENV = "TWISTLAB_CACHE_DIR"

VERIFY_CHECKS = {
    "s3-example": vf.CLAIM_REFS["s3_example"],
    "prop-1-1": vf.CLAIM_REFS["prop_1_1"],
    "theorem-a": vf.CLAIM_REFS["theorem_a"],
    "regularity": vf.CLAIM_REFS["regularity"],
    "power-formula": vf.CLAIM_REFS["power_formula"],
    "counterexample": "named non-subgroup displacement checks",
    "counterexamples": "the whole counterexample suite",
    "direct-product": vf.CLAIM_REFS["direct_product"],
    "all": "every claim-anchored check at desk scale",
}


def default_cache_dir(override: Optional[str]) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "twistlab"


def resolve_element(group, text: str) -> int:
    """Element by index, designated name, or printed normal-form word."""
    text = text.strip()
    try:
        return group.check_element(int(text))
    except ValueError:
        pass
    if group.order > gr.TABLE_CAP:
        raise UsageError("name lookup needs an index for groups this large")
    return cat.element_by_name(group, text)


def resolve_automorphism(entry: cat.CatalogEntry, spec: str):
    """identity | inner:<element> | named:<label> | map:gen=word,..."""
    G = entry.group
    if spec == "identity":
        return am.identity_automorphism(G)
    head, _, rest = spec.partition(":")
    if head == "inner":
        return am.inner(G, resolve_element(G, rest))
    if head == "named":
        return am.named_automorphism(entry, rest)
    if head == "map":
        images = {}
        for part in rest.split(","):
            if "=" not in part:
                raise UsageError(f"bad map component {part!r}")
            name, word = part.split("=", 1)
            images[name.strip()] = resolve_element(G, word)
        result = am.extend_generator_map(G, images)
        if isinstance(result, am.ExtensionFailure):
            raise ConstructionError(
                f"map does not extend: {result.reason} ({result.detail})")
        return result
    raise UsageError(f"unknown automorphism spec {spec!r}")


def _emit(payload, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True,
                                    separators=(",", ":")) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _emit_reports(reports, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(vf.reports_to_json(reports))
    elif fmt == "csv":
        sys.stdout.write(vf.reports_to_csv(reports))
    else:
        for r in reports:
            line = f"[{r.status.upper():4s}] {r.check_id} ({r.claim_ref})"
            if r.parameters:
                line += " " + ";".join(
                    f"{k}={v}" for k, v in sorted(r.parameters.items()))
            if r.wall_time is not None:
                line += f"  [{r.wall_time:.2f}s]"
            sys.stdout.write(line + "\n")
            for w in r.witnesses[:3]:
                sys.stdout.write(f"        witness: {w}\n")


def cmd_group(args) -> int:
    entry = cat.parse_spec(args.spec)
    G = entry.group
    info = {
        "spec": entry.spec,
        "order": G.order,
        "generators": {nm: int(i) for nm, i in
                       zip(G.generator_names, G.generators)},
        "designated": {k: int(v) for k, v in entry.designated.items()},
    }
    if G.order <= gr.TABLE_CAP:
        prof = cat.computed_profile(entry)
        info.update(prof)
        info["abelian"] = G.is_abelian()
    _emit(info, args.format)
    return 0


def cmd_aut(args) -> int:
    entry = cat.parse_spec(args.spec)
    cache_dir = default_cache_dir(args.cache_dir)
    if args.aut:
        phi = resolve_automorphism(entry, args.aut)
        G = entry.group
        payload = {
            "group": entry.spec,
            "aut": args.aut,
            "gen_images": {nm: G.element_name(phi(g)) for nm, g in
                           zip(G.generator_names, G.generators)},
            "fixes_center_pointwise": am.fixes_center_pointwise(G, phi),
            "is_central": am.is_central_automorphism(G, phi),
        }
        _emit(payload, args.format)
        return 0
    autos = am.get_automorphisms(entry, cache_dir=cache_dir,
                                 budget=args.budget)
    payload = {"group": entry.spec, "count": len(autos),
               "cache_dir": str(cache_dir)}
    _emit(payload, args.format)
    return 0


def cmd_twisted(args) -> int:
    entry = cat.parse_spec(args.group)
    G = entry.group
    phi = resolve_automorphism(entry, args.aut)
    disp = tw.displacement_set(G, phi)
    fixed = tw.fixed_subgroup(G, phi)
    payload = {
        "group": entry.spec,
        "aut": args.aut,
        "displacement": disp.names(),
        "cardinality": disp.cardinality,
        "is_subgroup": disp.is_subgroup,
        "is_normal": disp.is_normal,
        "fixed_subgroup_order": len(fixed),
    }
    if disp.witness is not None:
        payload["witness"] = [G.element_name(w) for w in disp.witness]
    if args.partition:
        payload["reidemeister_number"] = tw.reidemeister_number(G, phi)
    if args.format == "human":
        members = ", ".join(disp.names())
        flag = "a subgroup" if disp.is_subgroup else "not a subgroup"
        sys.stdout.write(f"[{entry.spec}, {args.aut}] = {{{members}}}\n")
        sys.stdout.write(f"{flag}; |C(phi)| = {len(fixed)}\n")
        if args.partition:
            sys.stdout.write(
                f"Reidemeister number {payload['reidemeister_number']}\n")
    else:
        _emit(payload, args.format)
    return 0


def cmd_verify(args) -> int:
    cache_dir = default_cache_dir(args.cache_dir)
    seed = args.seed
    check = args.check
    reports: list[vf.VerificationReport]
    if check == "s3-example":
        reports = [vf.check_s3_example()]
    elif check == "prop-1-1":
        reports = [vf.check_prop_1_1()]
    elif check == "theorem-a":
        if args.mode == "sampled" and seed is None:
            raise UsageError("sampled mode requires --seed")
        reports = vf.check_theorem_a(
            args.n, args.p, args.mode, samples=args.samples,
            seed=seed, cache_dir=cache_dir)
    elif check == "regularity":
        reports = [vf.check_regularity(args.group or "theorem_a:n=2,p=3")]
    elif check == "power-formula":
        reports = [vf.check_power_formula(args.n)]
    elif check == "counterexample":
        if not args.label:
            raise UsageError("counterexample needs --label")
        reports = [vf.check_counterexample(args.label, n=args.n, p=args.p,
                                           m=args.m, kind=args.kind)]
    elif check == "counterexamples":
        reports = [
            vf.check_counterexample("two_group", n=2),
            vf.check_counterexample("two_group", n=3),
            vf.check_counterexample("dihedral", n=16),
            vf.check_counterexample("q8"),
            vf.check_counterexample("heisenberg", p=3),
            vf.check_counterexample("modular", p=3),
            vf.check_counterexample("extraspecial", p=3, m=2),
            vf.check_counterexample("extraspecial", p=2, m=2),
        ]
    elif check == "direct-product":
        reports = [vf.check_direct_product(pairs=args.samples or 100,
                                           seed=seed if seed is not None else 0,
                                           cache_dir=cache_dir)]
    elif check == "all":
        reports = vf.run_all(seed=seed if seed is not None else 42,
                             cache_dir=cache_dir,
                             samples=args.samples or 10_000)
    else:
        raise UsageError(f"unknown verify check {check!r}")
    _emit_reports(reports, args.format)
    return vf.exit_code(reports)


def cmd_search(args) -> int:
    report = vf.search_two_group(max_n=args.max_n, samples=args.samples or 500,
                                 seed=args.seed if args.seed is not None else 0)
    _emit_reports([report], args.format)
    return 0


def cmd_cache(args) -> int:
    cache_dir = default_cache_dir(args.cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    entries = sorted(cache_dir.glob("*.jsonl"))
    if args.action == "list":
        for path in entries:
            with open(path, encoding="utf-8") as fh:
                header = json.loads(fh.readline())
            sys.stdout.write(
                f"{path.name}  descriptor={header.get('descriptor')} "
                f"count={header.get('count')}\n")
        if not entries:
            sys.stdout.write("cache is empty\n")
        return 0
    if args.action == "clear":
        for path in entries:
            path.unlink()
        sys.stdout.write(f"removed {len(entries)} entries\n")
        return 0
    if args.action == "validate":
        bad = 0
        for path in entries:
            with open(path, encoding="utf-8") as fh:
                header = json.loads(fh.readline())
            descriptor = header.get("descriptor", "")
            try:
                entry = cat.parse_spec(descriptor)
                am.load_enumeration(path, descriptor, entry.group)
                sys.stdout.write(f"{path.name}  ok\n")
            except (CacheCorrupt, UsageError, ConstructionError) as exc:
                bad += 1
                sys.stdout.write(f"{path.name}  QUARANTINED: {exc}\n")
        return 3 if bad else 0
    raise UsageError(f"unknown cache action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistlab",
        description=("Exact twisted-conjugacy computations over a catalog "
                     "of finite groups, with claim-anchored verification."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("human", "json", "csv"),
                       default="human")
        p.add_argument("--cache-dir", default=None,
                       help=f"cache directory (env {CACHE_ENV})")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=1,
                       help="parallelism cap for compiled scans")
        p.add_argument("--budget", type=int,
                       default=am.DEFAULT_ENUM_BUDGET,
                       help="candidate budget for enumerations")

    p_group = sub.add_parser("group", help="construct and profile a group")
    p_group.add_argument("spec")
    common(p_group)
    p_group.set_defaults(func=cmd_group)

    p_aut = sub.add_parser("aut", help="enumerate or inspect automorphisms")
    p_aut.add_argument("spec")
    p_aut.add_argument("--aut", default=None,
                       help="identity | inner:<g> | named:<label> | map:...")
    common(p_aut)
    p_aut.set_defaults(func=cmd_aut)

    p_tw = sub.add_parser("twisted", help="displacement set of one twist")
    p_tw.add_argument("--group", required=True)
    p_tw.add_argument("--aut", required=True)
    p_tw.add_argument("--partition", action="store_true",
                      help="also count the twisted classes")
    common(p_tw)
    p_tw.set_defaults(func=cmd_twisted)

    verify_help = "; ".join(f"{k}: {v}" for k, v in VERIFY_CHECKS.items())
    p_vf = sub.add_parser("verify", help="run claim-anchored checks",
                          description=f"Checks and their claim anchors: "
                                      f"{verify_help}")
    p_vf.add_argument("check", choices=sorted(VERIFY_CHECKS))
    p_vf.add_argument("--n", type=int, default=2)
    p_vf.add_argument("--p", type=int, default=3)
    p_vf.add_argument("--m", type=int, default=2)
    p_vf.add_argument("--kind", default=None)
    p_vf.add_argument("--label", default=None)
    p_vf.add_argument("--group", default=None)
    p_vf.add_argument("--mode", choices=("exhaustive", "structured",
                                         "sampled"), default="exhaustive")
    p_vf.add_argument("--samples", type=int, default=None)
    common(p_vf)
    p_vf.set_defaults(func=cmd_verify)

    p_search = sub.add_parser(
        "search", help="exploration sweep over the 2-group family "
                       "(no pass/fail semantics)")
    p_search.add_argument("--max-n", type=int, default=3)
    p_search.add_argument("--samples", type=int, default=None)
    common(p_search)
    p_search.set_defaults(func=cmd_search)

    p_cache = sub.add_parser("cache", help="administer the enumeration cache")
    p_cache.add_argument("action", choices=("list", "clear", "validate"))
    common(p_cache)
    p_cache.set_defaults(func=cmd_cache)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) and args.workers > 1:
        try:  # cap compiled-scan threads; harmless when numba is absent
            import numba
            numba.set_num_threads(min(args.workers, numba.config.NUMBA_NUM_THREADS))
        except Exception:
            pass
    try:
        return args.func(args)
    except (UsageError, ConstructionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (BudgetError, CacheCorrupt) as exc:
        sys.stderr.write(f"incomplete: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
