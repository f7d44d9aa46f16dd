"""Command line front end.

Subcommands delegate 1:1 to the library and print either stable key=value
text or JSON.  Exit codes: 0 computed, 2 bad input, 3 a resource cap was hit
before an answer was certain.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .degrees import (
    degree_exists,
    degree_set,
    fixed_degree_length_bound,
    min_degree,
    multi_degree_exists,
    witness_length_bound,
)
from .folding import fold
from .graphs import GraphError, label_process
from .ideal import (
    Problem,
    build_G,
    depends,
    normal_generators,
    parity_class,
)
from .moves import cancel_inverse_spec, find_parallel_couples, is_degree_preserving
from .rational import CapExceeded
from .words import WordError, ambient_word


@dataclass
class RunConfig:
    """Parsed invocation: ranks, words, caps and output switches."""

    ambient_rank: int
    h: list[str]
    g: list[str]
    caps: dict = field(default_factory=lambda: {"path_len": 16, "insertion_len": 8,
                                                "pattern_parallelism": 1})
    output: dict = field(default_factory=lambda: {"format": "text", "dot_dir": None})
    relative_ambient: bool = True


def _split_words(text: str) -> list[str]:
    if text is None or text.strip() == "":
        return []
    return [part.strip() for part in text.split(",") if part.strip() != ""]


def _config(args) -> RunConfig:
    cfg = RunConfig(
        ambient_rank=args.n,
        h=_split_words(args.h),
        g=_split_words(getattr(args, "g", None)),
    )
    cfg.caps["path_len"] = getattr(args, "cap_len", 16)
    cfg.caps["pattern_parallelism"] = getattr(args, "jobs", 1)
    cfg.output["format"] = "json" if getattr(args, "json", False) else "text"
    cfg.output["dot_dir"] = getattr(args, "emit_stages", None)
    cfg.relative_ambient = not getattr(args, "absolute_ambient", False)
    return cfg


def _problem(cfg: RunConfig) -> Problem:
    if cfg.ambient_rank < 1:
        raise WordError("ambient rank must be at least 1")
    h = tuple(ambient_word(w, cfg.ambient_rank) for w in cfg.h)
    g = tuple(ambient_word(w, cfg.ambient_rank) for w in cfg.g)
    if not g:
        raise WordError("at least one target word is required (--g)")
    return Problem(cfg.ambient_rank, h, g)


def _emit(cfg: RunConfig, json_payload: dict, text_lines: list[str]) -> None:
    if cfg.output["format"] == "json":
        print(json.dumps(json_payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_depends(args) -> int:
    cfg = _config(args)
    answer = depends(_problem(cfg))
    _emit(cfg, {"depends": answer}, ["depends=%s" % str(answer).lower()])
    return 0


def cmd_generators(args) -> int:
    cfg = _config(args)
    pres = normal_generators(_problem(cfg))
    payload = pres.to_json_dict()
    lines = [
        "h_basis = %s" % (", ".join(str(w) for w in pres.h_basis) or "(trivial)"),
        "generators = %s" % "; ".join(str(w) for w in pres.generators),
        "L = %d" % pres.edge_count,
        "rank_H = %d" % pres.rank_h,
        "rank_Hg = %d" % pres.rank_hg,
        "parity = %s" % (parity_class(pres) if pres.generators else "trivial"),
    ]
    _emit(cfg, payload, lines)
    return 0


def cmd_mindeg(args) -> int:
    cfg = _config(args)
    problem = _problem(cfg)
    pres = normal_generators(problem)
    d, witness = min_degree(problem, pres, relative_ambient=cfg.relative_ambient)
    bound = witness_length_bound(pres.edge_count, d)
    payload = {"d_min": d, "witness": str(witness)}
    lines = [
        "d_min=%d" % d,
        "witness=%s" % witness,
        "witness_path_length_bound=%d" % bound,
    ]
    _emit(cfg, payload, lines)
    return 0


def cmd_degree(args) -> int:
    cfg = _config(args)
    problem = _problem(cfg)
    if args.d < 0:
        raise WordError("degree must be nonnegative")
    if len(args.d_rest) > 0:
        dvec = [args.d] + args.d_rest
        answer = multi_degree_exists(problem, dvec, relative_ambient=cfg.relative_ambient)
        payload = {"dvec": dvec, "exists": answer}
        lines = ["dvec=%s" % ",".join(str(x) for x in dvec),
                 "exists=%s" % str(answer).lower()]
    else:
        answer = degree_exists(problem, None, args.d, relative_ambient=cfg.relative_ambient)
        L = normal_generators(problem).edge_count
        payload = {"d": args.d, "exists": answer}
        lines = [
            "d=%d" % args.d,
            "exists=%s" % str(answer).lower(),
            "bounded_search_equivalent_cap=%d" % fixed_degree_length_bound(L, args.d),
        ]
    _emit(cfg, payload, lines)
    return 0


def cmd_degset(args) -> int:
    cfg = _config(args)
    problem = _problem(cfg)
    pres = normal_generators(problem)
    d, witness = min_degree(problem, pres, relative_ambient=cfg.relative_ambient)
    descriptor = degree_set(problem, pres, relative_ambient=cfg.relative_ambient)
    payload = {
        "d_min": d,
        "witness": str(witness),
        "degree_set": descriptor.to_json_dict(),
    }
    lines = [
        "case=%s" % descriptor.case,
        "base=%s" % descriptor.base,
        "exceptional=%s" % ",".join(str(x) for x in sorted(descriptor.exceptional)),
        "verified_up_to=%d" % descriptor.verified_up_to,
        "d_min=%d" % d,
        "witness=%s" % witness,
    ]
    _emit(cfg, payload, lines)
    return 0


def cmd_fold(args) -> int:
    cfg = _config(args)
    if cfg.g:
        wedge = build_G(_problem(cfg))
        graph = wedge.graph
    else:
        if cfg.ambient_rank < 1:
            raise WordError("ambient rank must be at least 1")
        from .graphs import wedge_of_words

        words = [ambient_word(w, cfg.ambient_rank) for w in cfg.h]
        graph = wedge_of_words(cfg.ambient_rank, [w for w in words if len(w) > 0])
    trace = fold(graph)
    stages = len(trace.steps)
    final = trace.final
    payload = {
        "stages": stages,
        "rank_preserving": trace.k,
        "vertices": final.num_vertices,
        "edges": len(final.edges),
        "rank": final.rank(),
    }
    lines = [
        "fold_steps=%d" % stages,
        "rank_preserving_steps=%d" % trace.k,
        "final_vertices=%d" % final.num_vertices,
        "final_edges=%d" % len(final.edges),
        "rank=%d" % final.rank(),
    ]
    dot_dir = cfg.output["dot_dir"]
    if dot_dir:
        os.makedirs(dot_dir, exist_ok=True)
        for stage in range(stages + 1):
            stage_graph, _, _ = trace.graph_at(stage)
            path = os.path.join(dot_dir, "stage_%03d.dot" % stage)
            with open(path, "w") as fh:
                fh.write(stage_graph.to_dot("stage_%03d" % stage))
        lines.append("dot_stages=%d" % (stages + 1))
        payload["dot_stages"] = stages + 1
    _emit(cfg, payload, lines)
    return 0


def cmd_moves_trace(args) -> int:
    cfg = _config(args)
    problem = _problem(cfg)
    pres = normal_generators(problem)
    if not pres.generator_paths:
        raise WordError("no generator paths to trace moves on")
    idx = args.gen_index
    if not (0 <= idx < len(pres.generator_paths)):
        raise WordError("generator index out of range")
    path = pres.generator_paths[idx]
    proc = label_process(path)
    pairs = find_parallel_couples(path, proc)
    lines = ["path_length=%d" % len(path.steps), "couples=%d" % len(proc.couples),
             "parallel_pairs=%d" % len(pairs)]
    moves_json = []
    for pc in pairs:
        preserving = is_degree_preserving(pres.wedge, path, proc, pc)
        spec = cancel_inverse_spec(path, proc, pc)
        lines.append(
            "move couple=(%d,%d) degree_preserving=%s insert_couple=%d word=%s"
            % (pc.alpha, pc.beta, str(preserving).lower(), spec.couple, spec.word)
        )
        moves_json.append(
            {
                "alpha": pc.alpha,
                "beta": pc.beta,
                "degree_preserving": preserving,
                "insert_couple": spec.couple,
                "word": str(spec.word),
            }
        )
    payload = {"path_length": len(path.steps), "moves": moves_json}
    _emit(cfg, payload, lines)
    return 0


def cmd_oracle(args) -> int:
    from .oracle import enumerate_kernel_loops

    cfg = _config(args)
    problem = _problem(cfg)
    wedge = build_G(problem)
    loops = enumerate_kernel_loops(wedge, cfg.caps["path_len"],
                                   jobs=cfg.caps["pattern_parallelism"])
    lines = ["cap_len=%d" % cfg.caps["path_len"], "loops=%d" % len(loops)]
    payload = {"cap_len": cfg.caps["path_len"], "loops": []}
    for loop in loops:
        lines.append("len=%d degree=%d equation=%s" % (loop.length, loop.degree, loop.equation))
        payload["loops"].append(
            {"len": loop.length, "degree": loop.degree, "equation": str(loop.equation)}
        )
    _emit(cfg, payload, lines)
    return 0


def cmd_report(args) -> int:
    from .report import render_report

    cfg = _config(args)
    problem = _problem(cfg)
    written = render_report(
        problem,
        args.out,
        cap_len=cfg.caps["path_len"],
        jobs=cfg.caps["pattern_parallelism"],
        relative_ambient=cfg.relative_ambient,
    )
    for path in written:
        print(path)
    return 0


def _add_common(p: argparse.ArgumentParser, need_g: bool = True) -> None:
    p.add_argument("-n", type=int, required=True, help="ambient free group rank")
    p.add_argument("--h", default="", help="comma-separated subgroup generators ('' = trivial)")
    p.add_argument("--g", default="" if not need_g else None, required=need_g,
                   help="comma-separated target word(s)")
    p.add_argument("--cap-len", dest="cap_len", type=int, default=16,
                   help="path-length cap for bounded searches")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for bounded search")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--absolute-ambient", action="store_true",
                   help="skip rebasing degree queries onto <H, targets>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqideal",
        description="Equations over subgroups of free groups: ideals, degrees, foldings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depends", help="does any equation exist at all")
    _add_common(p)
    p.set_defaults(func=cmd_depends)

    p = sub.add_parser("generators", help="normal generators of the ideal")
    _add_common(p)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("mindeg", help="minimum equation degree with witness")
    _add_common(p)
    p.set_defaults(func=cmd_mindeg)

    p = sub.add_parser("degree", help="existence of equations of a fixed degree")
    _add_common(p)
    p.add_argument("d", type=int, help="degree to decide")
    p.add_argument("d_rest", type=int, nargs="*",
                   help="further per-variable degrees (multi-degree query)")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("degset", help="the full degree set")
    _add_common(p)
    p.set_defaults(func=cmd_degset)

    p = sub.add_parser("fold", help="fold a wedge or subgroup graph, optionally emitting stages")
    _add_common(p, need_g=False)
    p.add_argument("--emit-stages", dest="emit_stages", default=None,
                   help="directory for stage_%%03d.dot files")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("moves-trace", help="audit parallel couples on a generator path")
    _add_common(p)
    p.add_argument("--gen-index", dest="gen_index", type=int, default=0)
    p.set_defaults(func=cmd_moves_trace)

    p = sub.add_parser("oracle", help="(diagnostic) brute-force kernel loop enumeration")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("report", help="write figures, CSV and JSON summaries to a directory")
    _add_common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WordError, GraphError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print("unknown: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
