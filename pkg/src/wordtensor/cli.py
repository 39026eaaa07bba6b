"""Command-line front end: experiment orchestration and bit-stable reports.

Every subcommand resolves its inputs (config file, flags, defaults), runs one
experiment, and emits a report either as human-readable text with timing or
as JSON with a versioned schema and no timing, so repeated runs of the same
config are byte-identical.  Exit status: 0 for a clean run, 2 when the run
completed but raised discrepancy flags, 1 on error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import check_op_laws
from .closure import DEFAULT_UNIVERSE_BUDGET, class_census, equiv_search
from .config import (DEFAULT_NODE_BUDGET, EXPERIMENTS, ExperimentConfig,
                     load_config)
from .errors import ConfigError, InvalidCap, ParseError
from .experiments import (appendix_suite, entanglement_demo,
                          equivalence_experiment, implication_experiment,
                          injective_regime, universality_experiment)
from .superlab import (AffineConfig, affine_experiment, sweep_all_ops,
                       sweep_flag_details)
from .tensor import analyze_iota, build_tensor, congruence_failures, entangled_classes
from .words import Word

SCHEMA_VERSION = 1


@dataclass
class Report:
    """One experiment's outcome in an envelope every subcommand shares."""
    experiment: str
    caps: Dict[str, object]
    body: Dict[str, object]
    flags: List[Dict[str, object]]
    echo: Optional[Dict[str, object]]
    elapsed_s: float

    def to_json(self) -> str:
        payload = {
            "schema": SCHEMA_VERSION,
            "experiment": self.experiment,
            "caps": self.caps,
            "config": self.echo,
            "report": self.body,
            "flags": self.flags,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        if self.caps:
            lines.append("caps: " + ", ".join(
                f"{k}={v}" for k, v in sorted(self.caps.items())))
        lines.extend(_text_block(self.body, indent="  "))
        if self.flags:
            lines.append(f"flags ({len(self.flags)}):")
            for f in self.flags:
                lines.append("  - " + json.dumps(f, sort_keys=True,
                                                 ensure_ascii=False))
        else:
            lines.append("flags: none")
        lines.append(f"elapsed: {self.elapsed_s:.3f}s")
        return "\n".join(lines) + "\n"

    @property
    def exit_code(self) -> int:
        return 2 if self.flags else 0


def _text_block(value, indent: str = "") -> List[str]:
    def show(v) -> str:
        return json.dumps(v, sort_keys=True, ensure_ascii=False)

    lines: List[str] = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_text_block(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {show(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}-")
                lines.extend(_text_block(v, indent + "  "))
            else:
                lines.append(f"{indent}- {show(v)}")
    else:
        lines.append(f"{indent}{show(value)}")
    return lines


def _require_system(cfg: Optional[ExperimentConfig], command: str):
    if cfg is None or cfg.system is None:
        raise ParseError(
            f"{command} needs a config file declaring a [system]")
    return cfg.system


def _param(cfg: Optional[ExperimentConfig], args, name: str, default):
    cli_value = getattr(args, name.replace("-", "_"), None)
    if cli_value is not None:
        return cli_value
    if cfg is not None and name in cfg.params:
        return cfg.params[name]
    return default


def _caps(cfg: Optional[ExperimentConfig], args, default_len: int,
          default_slack: int) -> Tuple[int, int]:
    cap_len, slack = default_len, default_slack
    if cfg is not None:
        cap_len, slack = cfg.resolved_caps(default_len, default_slack)
    if args.cap_L is not None:
        cap_len = args.cap_L
    if args.cap_k is not None:
        slack = args.cap_k
    if cap_len < 1 or slack < 0:
        raise InvalidCap(f"need L >= 1 and k >= 0, got L={cap_len} k={slack}")
    return cap_len, slack


def _budgets(cfg: Optional[ExperimentConfig], args) -> Tuple[int, int]:
    node = args.budget if args.budget is not None else \
        (cfg.node_budget if cfg else DEFAULT_NODE_BUDGET)
    universe = cfg.universe_budget if cfg else DEFAULT_UNIVERSE_BUDGET
    return node, universe


def _census_dict(census) -> Dict[str, object]:
    return {
        "n_words": census.n_words,
        "n_classes": census.n_classes,
        "n_singletons": census.n_singletons,
        "largest_class": census.largest_class,
        "size_histogram": [list(p) for p in census.size_histogram],
    }


def _letter_str(letter) -> str:
    if len(letter) == 1:
        return str(letter[0])
    return "(" + ",".join(str(c) for c in letter) + ")"


def _iota_dict(iota) -> Dict[str, object]:
    return {
        "injective_within_cap": iota.injective,
        "surjective_within_cap": iota.surjective,
        "n_letters": iota.n_letters,
        "n_classes": iota.n_classes,
        "entangled_class_ids": list(iota.entangled),
        "merged": [
            {"a": _letter_str(p.letter_a), "b": _letter_str(p.letter_b),
             "chain": [str(w) for w in p.chain]}
            for p in iota.merged_pairs],
    }


def _pop_flags(body: Dict[str, object]) -> List[Dict[str, object]]:
    flags = body.pop("flags", [])
    return list(flags)


def _run_check_op(cfg, args):
    if cfg is None or not cfg.operations:
        raise ParseError("check-op needs a config file declaring [operations]")
    wanted = _param(cfg, args, "op", None)
    names = [wanted] if wanted else sorted(cfg.operations)
    rows = []
    for name in names:
        if name not in cfg.operations:
            raise ParseError(f"operation {name!r} is not declared")
        laws = check_op_laws(cfg.operations[name])
        rows.append({
            "name": name,
            "total": laws.total,
            "associative": laws.associative,
            "commutative": laws.commutative,
            "witnesses": {k: (list(v) if v is not None else None)
                          for k, v in sorted(laws.witnesses.items())},
        })
    return {"operations": rows}, [], {}


def _run_closure(cfg, args):
    cap_len, slack = _caps(cfg, args, 3, 1)
    node_budget, universe_budget = _budgets(cfg, args)
    if cfg is not None and cfg.system is not None:
        space = build_tensor(cfg.system, cap_len, slack, universe_budget,
                             verify_triples=None)
        failures = congruence_failures(space, concat_cap=cap_len)
        flags = [{
            "kind": "congruence-violation",
            "u": str(Word(space.system.alphabet, u)),
            "v": str(Word(space.system.alphabet, v)),
            "appended": str(Word(space.system.alphabet, w)),
        } for u, v, w, cu, cv in failures[:8]]
        boundary = congruence_failures(space, concat_cap=space.universe.max_len,
                                       max_failures=64)
        body = {
            "n_rules": len(cfg.system.rules),
            "n_classes": space.n_classes,
            "census": _census_dict(class_census(space.equiv, cap_len)),
            "congruence_ok": not failures,
            "boundary_escapes": len(boundary),
        }
        return body, flags, {"L": cap_len, "k": slack}
    rep = equivalence_experiment(
        n_instances=int(_param(cfg, args, "instances", 20)),
        seed=int(_param(cfg, args, "seed", 20260815)),
        cap_len=cap_len, slack=slack)
    body = rep.summary()
    return body, _pop_flags(body), {"L": cap_len, "k": slack}


def _run_tensor(cfg, args):
    system = _require_system(cfg, "tensor")
    cap_len, slack = _caps(cfg, args, 3, 1)
    _, universe_budget = _budgets(cfg, args)
    space = build_tensor(system, cap_len, slack, universe_budget)
    body = {
        "n_letters": system.alphabet.n_letters,
        "n_rules": len(system.rules),
        "n_classes": space.n_classes,
        "census": _census_dict(class_census(space.equiv, cap_len)),
        "class_reps": [str(space.rep_word(c))
                       for c in range(min(space.n_classes, 32))],
    }
    if space.n_classes <= 32:
        body["op_table"] = [
            [space.op(i, j) for j in range(space.n_classes)]
            for i in range(space.n_classes)]
    return body, [], {"L": cap_len, "k": slack}


def _run_iota(cfg, args):
    cap_len, slack = _caps(cfg, args, 3, 1)
    if cfg is not None and cfg.system is not None:
        _, universe_budget = _budgets(cfg, args)
        space = build_tensor(cfg.system, cap_len, slack, universe_budget)
        return _iota_dict(analyze_iota(space)), [], {"L": cap_len, "k": slack}
    rep = injective_regime(
        n_instances=int(_param(cfg, args, "instances", 10)),
        seed=int(_param(cfg, args, "seed", 1234)),
        cap_len=cap_len, slack=slack)
    body = rep.summary()
    return body, _pop_flags(body), {"L": cap_len, "k": slack}


def _run_entangled(cfg, args):
    cap_len, slack = _caps(cfg, args, 3, 1)
    if cfg is not None and cfg.system is not None:
        _, universe_budget = _budgets(cfg, args)
        space = build_tensor(cfg.system, cap_len, slack, universe_budget)
        iota = analyze_iota(space)
        body = _iota_dict(iota)
        body["entangled_members"] = {
            str(cid): [str(Word(cfg.system.alphabet, m))
                       for m in space.members(cid)]
            for cid in entangled_classes(space)}
        return body, [], {"L": cap_len, "k": slack}
    rep = entanglement_demo(cap_len, slack)
    body = rep.summary()
    return body, _pop_flags(body), {"L": cap_len, "k": slack}


def _run_refine(cfg, args):
    cap_len, slack = _caps(cfg, args, 3, 1)
    node_budget, _ = _budgets(cfg, args)
    rep = implication_experiment(
        n_instances=int(_param(cfg, args, "instances", 10)),
        pairs_per_instance=int(_param(cfg, args, "pairs", 20)),
        seed=int(_param(cfg, args, "seed", 0xBEEF)),
        cap_len=cap_len, slack=slack, node_budget=node_budget)
    body = rep.summary()
    return body, _pop_flags(body), {"L": cap_len, "k": slack}


def _run_universality(cfg, args):
    rep = universality_experiment(
        n_instances=int(_param(cfg, args, "instances", 50)),
        seed=int(_param(cfg, args, "seed", 0x5EED)))
    body = rep.summary()
    return body, _pop_flags(body), {}


def _run_theorem21(cfg, args):
    size = int(_param(cfg, args, "size", 2))
    cap_len, slack = _caps(cfg, args, 4, 2)
    workers = int(_param(cfg, args, "workers", 1))
    _, universe_budget = _budgets(cfg, args)
    rep = sweep_all_ops(size, cap_len, slack, workers, universe_budget)
    body = rep.summary()
    if rep.n_ops <= 256:
        body["rows"] = [
            [r.index, r.associative, r.commutative, r.injective, r.surjective]
            for r in rep.rows]
    flags = sweep_flag_details(rep, universe_budget)
    return body, flags, {"L": cap_len, "k": slack}


def _run_affine(cfg, args):
    cap_len, slack = _caps(cfg, args, 3, 2)
    node_budget, _ = _budgets(cfg, args)
    config = AffineConfig(
        a=int(_param(cfg, args, "a", 2)),
        b=int(_param(cfg, args, "b", 2)),
        cap_value=int(_param(cfg, args, "cap_value", 16)),
        cap_len=cap_len, slack=slack, search_budget=node_budget)
    if config.a + config.b < 3:
        raise InvalidCap(
            f"affine coefficients must satisfy a + b >= 3, "
            f"got a={config.a} b={config.b}")
    rep = affine_experiment(config)
    body = rep.summary()
    return body, _pop_flags(body), {"L": cap_len, "k": slack}


def _run_appendix(cfg, args):
    body = appendix_suite().summary()
    return body, _pop_flags(body), {}


def _run_equiv(cfg, args):
    system = _require_system(cfg, "equiv")
    words = list(getattr(args, "words", []) or [])
    if not words and cfg is not None:
        words = [str(w) for w in cfg.params.get("words", [])]
    if len(words) != 2:
        raise ParseError("equiv needs two words, e.g. equiv '1 γ 0' '2'")
    node_budget, _ = _budgets(cfg, args)
    u = Word.parse(system.alphabet, words[0])
    v = Word.parse(system.alphabet, words[1])
    res = equiv_search(u, v, system, node_budget)
    body = {
        "u": str(u),
        "v": str(v),
        "verdict": res.verdict.name.title(),
        "chain": [str(w) for w in res.chain],
        "nodes_expanded": res.cost,
    }
    return body, [], {}


RUNNERS = {
    "check-op": _run_check_op,
    "closure": _run_closure,
    "tensor": _run_tensor,
    "iota": _run_iota,
    "entangled": _run_entangled,
    "refine": _run_refine,
    "universality": _run_universality,
    "theorem21": _run_theorem21,
    "affine": _run_affine,
    "appendix-suite": _run_appendix,
    "equiv": _run_equiv,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordtensor",
        description="Quotients of free word semigroups by rewrite-generated "
                    "congruences: construction, embedding analysis, and "
                    "claim-by-claim desk experiments.")
    sub = parser.add_subparsers(dest="command")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="TOML experiment file")
        p.add_argument("--cap-L", type=int, dest="cap_L", default=None,
                       help="word length counted in results")
        p.add_argument("--cap-k", type=int, dest="cap_k", default=None,
                       help="extra length kept for chain-carrying words")
        p.add_argument("--budget", type=int, default=None,
                       help="search node budget")
        p.add_argument("--out", help="write the report to this path")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if name in ("closure", "iota", "refine", "universality"):
            p.add_argument("--instances", type=int, default=None)
            p.add_argument("--seed", type=int, default=None)
        if name == "refine":
            p.add_argument("--pairs", type=int, default=None)
        if name == "theorem21":
            p.add_argument("--size", type=int, default=None)
            p.add_argument("--workers", type=int, default=None)
        if name == "affine":
            p.add_argument("--a", type=int, default=None)
            p.add_argument("--b", type=int, default=None)
            p.add_argument("--cap-value", type=int, dest="cap_value",
                           default=None)
        if name == "check-op":
            p.add_argument("--op", default=None,
                           help="check one declared operation")
        if name == "equiv":
            p.add_argument("words", nargs="*",
                           help="two words, e.g. '1 γ 0' '2'")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        print("error: pick an experiment subcommand", file=sys.stderr)
        return 1
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None and cfg.experiment \
                and cfg.experiment != args.command:
            raise ParseError(
                f"config selects experiment {cfg.experiment!r} but the "
                f"command line says {args.command!r}")
        started = time.perf_counter()
        body, flags, caps = RUNNERS[args.command](cfg, args)
        elapsed = time.perf_counter() - started
    except (ConfigError, ParseError, InvalidCap) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - last-resort context
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = Report(experiment=args.command, caps=caps, body=body,
                    flags=flags, echo=cfg.echo if cfg else None,
                    elapsed_s=elapsed)
    rendered = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
