"""Command-line surface: verification, generation, search, and reproduction
drivers wired end-to-end.

Exit codes are a stable contract: 0 = success/verified/identical,
1 = negative result (not a pair, mismatch, nothing found), 2 = usage or
parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from . import __version__, refdata
from .candgen import (
    CandidatePair,
    GenerationProfile,
    ProfileError,
    candidates_d5,
    candidates_general,
)
from .decompress import (
    SearchConfig,
    SearchConfigError,
    orbit_search,
    uncompress_search,
)
from .diophantine import admits_unit_sum, odd_five_squares
from .grouptools import (
    GroupError,
    LexRankCode,
    block_from_codes,
    lex_rank,
    lex_unrank,
    orbits,
    sequence_from_block,
)
from .seqcore import (
    SequenceError,
    compress,
    format_sequence,
    psd,
    read_sequences,
    verify_legendre_pair,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


@dataclass
class RunManifest:
    """Reproducibility record written beside any randomized command output."""

    argv: list
    seed: Optional[int]
    version: str
    python: str
    input_digests: dict
    result_digest: str
    wall_time_s: float

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=1, sort_keys=True)
            fh.write("\n")


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _jobs(requested: int) -> int:
    cap = os.environ.get("LP_THREADS")
    if cap:
        return max(1, min(requested, int(cap)))
    return max(1, requested)


def _read_single_sequence(path: str):
    seqs = read_sequences(path)
    if len(seqs) != 1:
        raise SequenceError(f"{path}: expected exactly one sequence line")
    return seqs[0]


# --- subcommand handlers ----------------------------------------------------

def cmd_verify(args) -> int:
    a = _read_single_sequence(args.file_a)
    b = _read_single_sequence(args.file_b)
    rep = verify_legendre_pair(a, b)
    n = len(a)
    if rep.is_legendre_pair:
        print(f"Legendre pair of length {n}: yes")
    else:
        print(f"Legendre pair of length {n}: no (failing shift {rep.failing_shift})")
    if rep.x_value is not None:
        print(f"x = {rep.x_value}")
    if rep.n1_n2 is not None:
        n1, n2 = rep.n1_n2
        print(f"n1, n2 = {n1}, {n2} (n1 + n2 = {n1 + n2}, 2ℓ+2 = {2 * n + 2})")
    if rep.psd_at_m is not None:
        ea, eb = rep.psd_at_m
        m = n // 5
        print(f"PSD_A({m}) = {ea} = {ea.to_float():.7f}  (float {psd(a, m):.7f})")
        print(f"PSD_B({m}) = {eb} = {eb.to_float():.7f}  (float {psd(b, m):.7f})")
    elif n % 3 == 0:
        m = n // 3
        print(f"PSD_A({m}) float = {psd(a, m):.7f}, PSD_B({m}) float = {psd(b, m):.7f}")
    return EXIT_OK if rep.is_legendre_pair else EXIT_NEGATIVE


def cmd_compress(args) -> int:
    for seq in read_sequences(args.file):
        print(format_sequence(compress(seq, args.m)))
    return EXIT_OK


def cmd_psd(args) -> int:
    for seq in read_sequences(args.file):
        if args.k is not None:
            print(f"{psd(seq, args.k):.9f}")
        else:
            vals = " ".join(f"{psd(seq, k):.6f}" for k in range(len(seq)))
            print(vals)
    return EXIT_OK


def cmd_dioph(args) -> int:
    sols = odd_five_squares(args.m)
    if args.json:
        payload = [
            {"values": list(s), "admits_unit_sum": admits_unit_sum(s)} for s in sols
        ]
        print(json.dumps({"m": args.m, "target": 4 * args.m + 1, "solutions": payload}))
    else:
        for s in sols:
            flag = "admits_unit_sum" if admits_unit_sum(s) else "ruled_out"
            print(f"{list(s)} {flag}")
    return EXIT_OK


def cmd_candidates(args) -> int:
    t0 = time.time()
    x_filter = set(args.x) if args.x else None
    if args.profile:
        with open(args.profile, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        profile = GenerationProfile(
            ell=raw["ell"],
            m=raw["m"],
            d=raw["d"],
            abs_value_counts={int(k): v for k, v in raw["abs_value_counts"].items()},
            balanced=raw.get("balanced", args.balanced),
            x_filter=x_filter,
            budget=args.budget,
            seed=args.seed,
        )
        profile.validate()
        pairs = list(candidates_general(profile))
        ell, m = profile.ell, profile.m
    else:
        if args.ell % 5 != 0:
            print("lengths not divisible by 5 need --profile", file=sys.stderr)
            return EXIT_USAGE
        ell, m = args.ell, args.ell // 5
        if args.m and args.m != m:
            print(f"--m {args.m} inconsistent with --ell {ell} (needs m={m})",
                  file=sys.stderr)
            return EXIT_USAGE
        pairs = candidates_d5(m, x_filter)
    payload = {
        "ell": ell,
        "m": m,
        "pairs": [{"a": list(p.a), "b": list(p.b), "x": p.x} for p in pairs],
    }
    text = json.dumps(payload, indent=1)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    manifest = RunManifest(
        argv=sys.argv[1:],
        seed=args.seed,
        version=__version__,
        python=sys.version.split()[0],
        input_digests={"profile": _sha256_file(args.profile)} if args.profile else {},
        result_digest=_sha256_text(text),
        wall_time_s=round(time.time() - t0, 3),
    )
    manifest.write(args.out + ".manifest.json")
    print(f"wrote {len(pairs)} candidate pairs to {args.out}")
    return EXIT_OK if pairs else EXIT_NEGATIVE


def _search_candidates(ell, cands, budget, seed, max_solutions, jobs):
    """Run uncompress_search over candidates, optionally in parallel shards."""
    configs = [
        SearchConfig(budget_nodes=budget, seed=seed, max_solutions=max_solutions)
        for _ in cands
    ]
    if jobs > 1 and len(cands) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(uncompress_search, [ell] * len(cands), cands, configs))
    else:
        results = [uncompress_search(ell, c, cfg) for c, cfg in zip(cands, configs)]
    return results


def cmd_decompress(args) -> int:
    t0 = time.time()
    with open(args.candidates, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    ell = args.ell or payload["ell"]
    m = payload["m"]
    cands = [
        CandidatePair(a=tuple(p["a"]), b=tuple(p["b"]), ell=ell, m=m, x=p.get("x"))
        for p in payload["pairs"]
    ]
    results = _search_candidates(
        ell, cands, args.budget, args.seed, args.max_solutions, _jobs(args.jobs)
    )
    lines = []
    records = []
    nodes = 0
    exhausted = True
    for cand, res in zip(cands, results):
        nodes += res.nodes_visited
        exhausted = exhausted and res.exhausted
        for A, B in res.pairs:
            rep = verify_legendre_pair(A, B)
            lines.append(format_sequence(A))
            lines.append(format_sequence(B))
            records.append({"x": rep.x_value, "codes": None})
    text = "\n".join(lines) + ("\n" if lines else "")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    sidecar = {
        "pairs": records,
        "nodes_visited": nodes,
        "exhausted": exhausted,
    }
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")
    manifest = RunManifest(
        argv=sys.argv[1:],
        seed=args.seed,
        version=__version__,
        python=sys.version.split()[0],
        input_digests={"candidates": _sha256_file(args.candidates)},
        result_digest=_sha256_text(text),
        wall_time_s=round(time.time() - t0, 3),
    )
    manifest.write(args.out + ".manifest.json")
    found = len(records)
    print(f"found {found} pair(s), visited {nodes} nodes, exhausted={exhausted}")
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_search_orbit(args) -> int:
    t0 = time.time()
    hints = []
    if args.hints:
        with open(args.hints, "r", encoding="utf-8") as fh:
            hints = [tuple(h) for h in json.load(fh)]
    cfg = SearchConfig(
        strategy="orbit_restricted",
        budget_nodes=args.budget,
        max_solutions=args.max_solutions,
        seed=args.seed,
        subgroup_generators=tuple(args.gen),
        ones_orbits=args.ones,
        twos_orbits=args.twos,
        exhaustive=args.exhaustive,
        hint_codes=tuple(hints),
    )
    res = orbit_search(args.ell, cfg)
    lines = []
    records = []
    for (A, B), codes in zip(res.pairs, res.codes):
        rep = verify_legendre_pair(A, B)
        lines.append(format_sequence(A))
        lines.append(format_sequence(B))
        records.append({"x": rep.x_value, "codes": codes})
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        sidecar = {
            "pairs": records,
            "nodes_visited": res.nodes_visited,
            "exhausted": res.exhausted,
        }
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=1)
            fh.write("\n")
        manifest = RunManifest(
            argv=sys.argv[1:],
            seed=args.seed,
            version=__version__,
            python=sys.version.split()[0],
            input_digests={"hints": _sha256_file(args.hints)} if args.hints else {},
            result_digest=_sha256_text(text),
            wall_time_s=round(time.time() - t0, 3),
        )
        manifest.write(args.out + ".manifest.json")
    else:
        sys.stdout.write(text)
    print(
        f"found {len(res.pairs)} pair(s), visited {res.nodes_visited} selections, "
        f"exhausted={res.exhausted}"
    )
    return EXIT_OK if res.pairs else EXIT_NEGATIVE


def cmd_orbits(args) -> int:
    table = orbits(args.ell, args.gen)
    for size in sorted(table.orbits_by_size):
        cls = table.orbits_by_size[size]
        print(f"size {size}: {len(cls)} orbits")
        for orb in cls:
            print("  {" + ",".join(map(str, orb)) + "}")
    return EXIT_OK


def cmd_rank(args) -> int:
    subset = [int(t) for t in args.set.split(",") if t]
    print(lex_rank(args.N, subset))
    return EXIT_OK


def cmd_unrank(args) -> int:
    subset = lex_unrank(args.N, args.k, args.r)
    print(",".join(map(str, subset)))
    return EXIT_OK


def cmd_decode_pair(args) -> int:
    with open(args.codes, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    table = orbits(args.ell, args.gen)
    out = []
    for side in ("a", "b"):
        codes = {}
        for size_str, spec in raw[side].items():
            size = int(size_str)
            n = len(table.orbits_by_size.get(size, []))
            codes[size] = LexRankCode(n=n, k=spec["k"], rank=spec["rank"])
        seq = sequence_from_block(block_from_codes(table, codes))
        out.append(seq)
        print(format_sequence(seq))
    rep = verify_legendre_pair(out[0], out[1])
    print(f"# legendre_pair={rep.is_legendre_pair} x={rep.x_value}", file=sys.stderr)
    return EXIT_OK if rep.is_legendre_pair else EXIT_NEGATIVE


def _diff_report(name: str, got, want) -> bool:
    if got == want:
        print(f"{name}: OK")
        return True
    print(f"{name}: MISMATCH")
    print(f"  computed: {got}")
    print(f"  reference: {want}")
    return False


def _reproduce_dioph_all() -> bool:
    golden = refdata.dioph_solutions()
    ok = True
    for m_str, entry in sorted(golden.items(), key=lambda kv: int(kv[0])):
        m = int(m_str)
        sols = [list(s) for s in odd_five_squares(m)]
        ruled = [list(s) for s in odd_five_squares(m) if not admits_unit_sum(s)]
        ok &= _diff_report(f"solutions m={m}", sols, entry["solutions"])
        ok &= _diff_report(f"ruled-out m={m}", ruled, entry["ruled_out"])
    return ok


def _reproduce_ell87() -> bool:
    data = refdata.ell87()
    ok = True
    for i, pair in enumerate(data["pairs"], 1):
        rep = verify_legendre_pair(pair["a"], pair["b"])
        ok &= _diff_report(f"pair {i} verifies", rep.is_legendre_pair, True)
        ok &= _diff_report(
            f"pair {i} A-compression",
            list(compress(pair["a"], data["m"])),
            data["compressed_a"],
        )
        ok &= _diff_report(
            f"pair {i} B-compression",
            list(compress(pair["b"], data["m"])),
            data["compressed_b"],
        )
    return ok


def _reproduce_ell85() -> bool:
    data = refdata.ell85()
    ell = data["ell"]
    table = orbits(ell, data["generators"])
    first = data["first_pair"]
    n1 = len(table.orbits_by_size[1])
    n2 = len(table.orbits_by_size[2])
    k1, k2 = data["ones_orbits"], data["twos_orbits"]
    ok = True
    seqs = {}
    for idx, cp in enumerate(data["code_pairs"]):
        pair_seqs = []
        for side in ("a", "b"):
            codes = {
                1: LexRankCode(n1, k1, cp[side]["ones"]),
                2: LexRankCode(n2, k2, cp[side]["twos"]),
            }
            block = block_from_codes(table, codes)
            pair_seqs.append(sequence_from_block(block))
            if idx == 0:
                want = sorted(first[f"{side}_block"])
                ok &= _diff_report(
                    f"pair 1 {side}-block", list(block.positions), want
                )
        rep = verify_legendre_pair(*pair_seqs)
        ok &= _diff_report(f"code pair {idx + 1} verifies", rep.is_legendre_pair, True)
        seqs[idx] = pair_seqs
    a1, b1 = seqs[0]
    m = data["m"]
    ok &= _diff_report(
        "pair 1 A 17-compression", list(compress(a1, m)), first["a_compressed"]
    )
    ok &= _diff_report(
        "pair 1 B 17-compression", list(compress(b1, m)), first["b_compressed"]
    )
    rep = verify_legendre_pair(a1, b1)
    ok &= _diff_report("pair 1 x", rep.x_value, first["x"])
    ok &= _diff_report(
        "pair 1 PSD_A within 1e-6",
        abs(psd(a1, m) - first["psd_a_at_m"]) < 1e-6,
        True,
    )
    ok &= _diff_report(
        "pair 1 PSD_B within 1e-6",
        abs(psd(b1, m) - first["psd_b_at_m"]) < 1e-6,
        True,
    )
    return ok


def _reproduce_table1_small() -> bool:
    """Exhaustive all-pairs search (trivial multiplier, a0=+1 gauge) for the
    x values realized at ℓ = 5 and 15, against the bundled reference rows."""
    rows = {row["ell"]: row["x"] for row in refdata.x_table()}
    ok = True
    for ell in (5, 15):
        cfg = SearchConfig(
            strategy="orbit_restricted",
            subgroup_generators=(1,),
            ones_orbits=(ell - 1) // 2,
            twos_orbits=0,
            exhaustive=True,
            p2_prefilter=False,
            budget_nodes=10**7,
        )
        res = orbit_search(ell, cfg)
        xs = {abs(verify_legendre_pair(A, B).x_value) for A, B in res.pairs}
        ok &= _diff_report(f"ℓ={ell} x-set", sorted(xs), sorted(rows[ell]))
    return ok


def cmd_reproduce(args) -> int:
    drivers = {
        "dioph-all": _reproduce_dioph_all,
        "ell87-verify": _reproduce_ell87,
        "ell85-decode": _reproduce_ell85,
        "table1-small": _reproduce_table1_small,
    }
    ok = drivers[args.section]()
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_pipeline(args) -> int:
    t0 = time.time()
    if args.ell % 5 != 0:
        print("pipeline needs 5 | ℓ (use candidates --profile + decompress otherwise)",
              file=sys.stderr)
        return EXIT_USAGE
    m = args.ell // 5
    x_filter = set(args.x) if args.x else None
    cands = candidates_d5(m, x_filter)
    print(f"ℓ={args.ell}: {len(cands)} candidate pair(s)")
    results = _search_candidates(
        args.ell, cands, args.budget, args.seed, args.max_solutions, _jobs(args.jobs)
    )
    lines = []
    found = []
    nodes = 0
    exhausted = True
    for cand, res in zip(cands, results):
        nodes += res.nodes_visited
        exhausted = exhausted and res.exhausted
        for A, B in res.pairs:
            rep = verify_legendre_pair(A, B)
            found.append(rep)
            lines.append(format_sequence(A))
            lines.append(format_sequence(B))
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        manifest = RunManifest(
            argv=sys.argv[1:],
            seed=args.seed,
            version=__version__,
            python=sys.version.split()[0],
            input_digests={},
            result_digest=_sha256_text(text),
            wall_time_s=round(time.time() - t0, 3),
        )
        manifest.write(args.out + ".manifest.json")
    else:
        sys.stdout.write(text)
    xs = sorted({abs(r.x_value) for r in found})
    print(
        f"found {len(found)} pair(s), |x| values {xs}, visited {nodes} nodes, "
        f"exhausted={exhausted} [{time.time() - t0:.1f}s]"
    )
    return EXIT_OK if found else EXIT_NEGATIVE


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lp", description="Legendre-pair compression search toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact Legendre-pair test on two sequence files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compress", help="m-compress every sequence in a file")
    p.add_argument("file")
    p.add_argument("-m", type=int, required=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("psd", help="power spectral density of sequences in a file")
    p.add_argument("file")
    p.add_argument("-k", type=int, default=None)
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("dioph", help="all-odd five-square solutions of 4m+1")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("candidates", help="generate candidate compressed pairs")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--x", type=int, nargs="*", default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", default=None, help="JSON generation profile")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("decompress", help="search full pairs for candidate file")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--candidates", required=True)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-solutions", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("search-orbit", help="orbit-restricted whole-sequence search")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--gen", type=int, nargs="+", required=True)
    p.add_argument("--ones", type=int, required=True)
    p.add_argument("--twos", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**5)
    p.add_argument("--max-solutions", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--hints", default=None, help="JSON list of [ones_rank, twos_rank]")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_search_orbit)

    p = sub.add_parser("orbits", help="multiplier orbits on Z_ℓ \\ {0}")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--gen", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("rank", help="lexicographic rank of an ascending subset")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("unrank", help="decode a lexicographic subset rank")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.set_defaults(func=cmd_unrank)

    p = sub.add_parser("decode-pair", help="decode LexRank codes to two sequences")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--gen", type=int, nargs="+", required=True)
    p.add_argument("--codes", required=True, help='JSON {"a": {"1": {"k":..,"rank":..}, ...}, "b": ...}')
    p.set_defaults(func=cmd_decode_pair)

    p = sub.add_parser("reproduce", help="recompute a bundled reference section")
    p.add_argument(
        "section",
        choices=["table1-small", "dioph-all", "ell85-decode", "ell87-verify"],
    )
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("pipeline", help="dioph → candidates → decompress end-to-end")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--x", type=int, nargs="*", default=None)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-solutions", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SequenceError, GroupError, ProfileError, SearchConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
