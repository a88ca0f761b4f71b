"""Command-line entry point.

Exit codes: 0 embeddable (or a non-deciding command succeeded), 1 not
embeddable, 2 unknown because a cap was hit, 3 and above for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

from . import corpus
from .complex_core import (SimplicialComplex2, StructuralError, TopoComplex, are_homeomorphic, detect_3book,
                           parse_smc, parse_tpc, to_topological)
from .dp.decide import EMBEDDABLE, NO_SPARSE, NOT_EMBEDDABLE, UNKNOWN_CAP, Verdict, decide_embeddable_bounded_bw
from .graph_core import CapError, Graph, ParseError, parse_graph
from .maps.enumerate import enumerate_proper_embeddings
from .maps.io import dumps_map
from .reductions import enumerate_essential_cuts

EXIT_CODES = {EMBEDDABLE: 0, NOT_EMBEDDABLE: 1, NO_SPARSE: 1, UNKNOWN_CAP: 2}
EXIT_ERROR = 3
EXIT_INTERNAL = 4

DEFAULT_MAX_STATES = 1_000_000
DEFAULT_SEED = 0

Complex = Union[SimplicialComplex2, TopoComplex]


@dataclass
class RunConfig:
    complex_path: Optional[str] = None
    graph_path: Optional[str] = None
    sparse_cap: Optional[int] = None
    max_states: int = DEFAULT_MAX_STATES
    mode: str = "dp"
    fmt: str = "json"
    workers: int = 1
    seed: int = DEFAULT_SEED

    def check(self) -> None:
        if self.sparse_cap is not None and self.sparse_cap < 0:
            raise ValueError("--sparse-cap must be nonnegative")
        if self.max_states <= 0:
            raise ValueError("--max-states must be positive")
        if self.workers <= 0:
            raise ValueError("--workers must be positive")


def read_complex(path: str) -> Complex:
    text = Path(path).read_text()
    if path.endswith(".smc"):
        return parse_smc(text)
    if path.endswith(".tpc"):
        return parse_tpc(text)
    return parse_tpc(text) if text.lstrip().startswith("{") else parse_smc(text)


def read_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_text())


def _topological(c: Complex) -> TopoComplex:
    return to_topological(c) if isinstance(c, SimplicialComplex2) else c


# ---------------------------------------------------------------------------
# verdict producers
# ---------------------------------------------------------------------------

def run_dp(c: Complex, g: Graph, cfg: RunConfig) -> Verdict:
    return decide_embeddable_bounded_bw(c, g, cap=cfg.sparse_cap, max_states=cfg.max_states,
                                        workers=cfg.workers)


def run_oracle(c: Complex, g: Graph, cfg: RunConfig, certificate: bool = False) -> dict:
    from .oracle import brute_force_embeddable

    if isinstance(c, SimplicialComplex2) and detect_3book(c):
        return {"verdict": EMBEDDABLE, "candidates_tried": 0, "cap": cfg.max_states,
                "stats": {"method": "3-book"}}
    try:
        res = brute_force_embeddable(g, _topological(c), search_cap=cfg.max_states)
    except CapError as exc:
        return {"verdict": UNKNOWN_CAP, "candidates_tried": 0, "cap": cfg.max_states,
                "stats": {"cap_error": str(exc)}}
    out = {"verdict": EMBEDDABLE if res.embeddable else NOT_EMBEDDABLE, "candidates_tried": 0,
           "cap": cfg.max_states, "stats": {"method": res.method}}
    if certificate and res.certificate is not None:
        out["certificate"] = dumps_map(res.certificate).rstrip("\n")
    return out


def _decisive(v: str) -> bool:
    return v in (EMBEDDABLE, NOT_EMBEDDABLE)


def decide_payload(c: Complex, g: Graph, cfg: RunConfig) -> dict:
    if cfg.mode == "oracle":
        out = run_oracle(c, g, cfg)
    else:
        out = run_dp(c, g, cfg).to_dict()
        if cfg.mode == "both":
            orc = run_oracle(c, g, cfg)
            out["stats"]["dp_verdict"] = out["verdict"]
            out["stats"]["oracle_verdict"] = orc["verdict"]
            if _decisive(out["verdict"]) and _decisive(orc["verdict"]) and out["verdict"] != orc["verdict"]:
                out["stats"]["disagreement"] = True
            elif not _decisive(out["verdict"]) and _decisive(orc["verdict"]):
                out["verdict"] = orc["verdict"]
                out["stats"]["decided_by"] = "oracle"
    out["stats"]["seed"] = cfg.seed
    out["stats"]["max_states"] = cfg.max_states
    return out


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, separators=(",", ":"), sort_keys=True))
        return
    for key in ("verdict", "candidates_tried", "cap"):
        print(f"{key}\t{payload[key]}")
    for key, val in sorted(payload["stats"].items()):
        print(f"stats.{key}\t{json.dumps(val, separators=(',', ':'), sort_keys=True)}")
    if "certificate" in payload:
        print(f"certificate\t{payload['certificate']}")


def _verdict_exit(payload: dict) -> int:
    if payload["stats"].get("disagreement"):
        return EXIT_INTERNAL
    return EXIT_CODES[payload["verdict"]]


def cmd_decide(cfg: RunConfig) -> int:
    c, g = read_complex(cfg.complex_path), read_graph(cfg.graph_path)
    payload = decide_payload(c, g, cfg)
    _emit(payload, cfg.fmt)
    return _verdict_exit(payload)


def cmd_oracle(cfg: RunConfig, certificate: bool) -> int:
    c, g = read_complex(cfg.complex_path), read_graph(cfg.graph_path)
    payload = run_oracle(c, g, cfg, certificate)
    payload["stats"]["seed"] = cfg.seed
    payload["stats"]["max_states"] = cfg.max_states
    _emit(payload, cfg.fmt)
    return _verdict_exit(payload)


def cmd_homeo(a: str, b: str) -> int:
    print("true" if are_homeomorphic(_topological(read_complex(a)), _topological(read_complex(b))) else "false")
    return 0


def cmd_cuts(path: str, max_states: int) -> int:
    t = _topological(read_complex(path))
    for cls in enumerate_essential_cuts(t.components, max_states=max_states):
        print(TopoComplex(cls, ()).dumps(), end="")
    return 0


def cmd_enumerate(path: str, k: int, max_states: int, cellular: bool) -> int:
    maps = enumerate_proper_embeddings(_topological(read_complex(path)), k, max_states=max_states,
                                       cellular_only=cellular)
    for m in maps:
        sys.stdout.write(dumps_map(m))
    print(json.dumps({"count": len(maps)}, separators=(",", ":")))
    return 0


def corpus_files() -> List[tuple]:
    """(file name, text) for the fixture catalog, in a fixed order."""
    files = []
    for name, make in corpus.COMPLEXES.items():
        c = make()
        files.append((f"{name}.smc", c.to_text()))
        if not detect_3book(c):
            # a 3-book has no topological form; it is decided before conversion
            files.append((f"{name}.tpc", to_topological(c).dumps()))
    for name, make in corpus.GRAPHS.items():
        files.append((f"{name.lower()}.g", make().to_text()))
    return files


def cmd_corpus(outdir: str) -> int:
    root = Path(outdir)
    root.mkdir(parents=True, exist_ok=True)
    for name, text in corpus_files():
        (root / name).write_text(text)
        print(name)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--complex", required=True, help=".smc or .tpc file")
    p.add_argument("--graph", required=True, help=".g file")
    p.add_argument("--sparse-cap", type=int, default=None,
                   help="edge cap for bounding graphs (default: the full bound 74c+26w)")
    p.add_argument("--mode", choices=("dp", "oracle", "both"), default="dp")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="recorded in the output; every step is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    parser.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="state budget for enumerations (default 10^6)")
    sub = parser.add_subparsers(dest="command", required=True)
    _instance_flags(sub.add_parser("decide", help="decide embeddability"))
    p = sub.add_parser("oracle", help="brute-force ground truth")
    _instance_flags(p)
    p.add_argument("--certificate", action="store_true", help="include a witness map when found")
    p = sub.add_parser("homeo", help="are two complexes homeomorphic")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("cuts", help="closure of a surface under essential cuts")
    p.add_argument("surface")
    p = sub.add_parser("enumerate", help="proper embeddings with at most k vertices and k edges")
    p.add_argument("complex")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cellular", action="store_true")
    p = sub.add_parser("corpus", help="write the fixture catalog")
    p.add_argument("outdir")
    # accept --max-states after the subcommand as well
    for name in ("decide", "oracle", "cuts", "enumerate"):
        sub.choices[name].add_argument("--max-states", type=int, default=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        if args.command in ("decide", "oracle"):
            cfg = RunConfig(args.complex, args.graph, args.sparse_cap, args.max_states,
                            "oracle" if args.command == "oracle" else args.mode, args.format,
                            args.workers, args.seed)
            cfg.check()
            if args.command == "oracle":
                return cmd_oracle(cfg, args.certificate)
            return cmd_decide(cfg)
        if args.command == "homeo":
            return cmd_homeo(args.a, args.b)
        if args.command == "cuts":
            return cmd_cuts(args.surface, args.max_states)
        if args.command == "enumerate":
            if args.k < 0:
                raise ValueError("--k must be nonnegative")
            return cmd_enumerate(args.complex, args.k, args.max_states, args.cellular)
        return cmd_corpus(args.outdir)
    except CapError as exc:
        print(f"cap: {exc}", file=sys.stderr)
        return 2
    except (OSError, ParseError, StructuralError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
