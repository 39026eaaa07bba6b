"""TOML experiment configuration: parsing, whole-file validation, resolution.

A config declares named carriers, operations and generators, wires them into
one rule system, sets caps and budgets, and selects an experiment.  Loading
validates everything up front and reports every problem found, not just the
first; only syntactically broken files abort early.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib  # type: ignore[no-redef]

from .algebra import (CayleyOp, Carrier, SubsetGenerator, affine_capped_op,
                      generator_from_op, mod_add_op, projection_op)
from .closure import DEFAULT_UNIVERSE_BUDGET
from .errors import ConfigError, InvalidCap, ParseError, UnresolvedReference
from .words import (RuleSystem, TupleAlphabet, Word, compile_explicit,
                    compile_from_binary_ops, compile_from_generators,
                    compile_from_op_sets)

UNIVERSE_BUDGET_ENV = "WORDTENSOR_UNIVERSE_BUDGET"
DEFAULT_NODE_BUDGET = 20_000

EXPERIMENTS = ("check-op", "closure", "tensor", "iota", "entangled", "refine",
               "universality", "theorem21", "affine", "appendix-suite", "equiv")

SYSTEM_KINDS = ("binary-ops", "op-sets", "explicit", "generators")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: Dict[str, object]
    carriers: Dict[str, Carrier]
    operations: Dict[str, CayleyOp]
    generators: Dict[str, SubsetGenerator]
    system: Optional[RuleSystem]
    cap_len: Optional[int]
    slack: Optional[int]
    node_budget: int
    universe_budget: int
    echo: Dict[str, object] = field(compare=False, default_factory=dict)

    def resolved_caps(self, default_len: int, default_slack: int) -> Tuple[int, int]:
        return (self.cap_len if self.cap_len is not None else default_len,
                self.slack if self.slack is not None else default_slack)


def _parse_op_form(name: str, form: str, carrier: Carrier,
                   issues: List[Exception]) -> Optional[CayleyOp]:
    tokens = form.split()
    try:
        if tokens[:1] == ["mod-add"] and len(tokens) == 2:
            n = int(tokens[1])
            if n != carrier.size:
                issues.append(InvalidCap(
                    f"operation {name!r}: mod-add {n} on a carrier of size "
                    f"{carrier.size}"))
                return None
            return mod_add_op(carrier)
        if tokens[:1] == ["affine"] and len(tokens) == 5 and tokens[3] == "cap":
            a, b, cap = int(tokens[1]), int(tokens[2]), int(tokens[4])
            if a + b < 3:
                issues.append(InvalidCap(
                    f"operation {name!r}: affine coefficients must satisfy "
                    f"a + b >= 3, got a={a} b={b}"))
                return None
            if cap + 1 != carrier.size:
                issues.append(InvalidCap(
                    f"operation {name!r}: affine cap {cap} needs a carrier "
                    f"of size {cap + 1}, got {carrier.size}"))
                return None
            return affine_capped_op(carrier, a, b)
        if tokens[:1] == ["projection"] and len(tokens) == 2 \
                and tokens[1] in ("left", "right"):
            return projection_op(carrier, tokens[1])
    except ValueError:
        pass
    issues.append(ParseError(
        f"operation {name!r}: unrecognized form {form!r}; expected "
        f"'mod-add n', 'affine a b cap N' or 'projection left|right'"))
    return None


def _parse_op_table(name: str, rows, carrier: Carrier,
                    issues: List[Exception]) -> Optional[CayleyOp]:
    n = carrier.size
    if (not isinstance(rows, list) or len(rows) != n
            or any(not isinstance(r, list) or len(r) != n for r in rows)):
        issues.append(ParseError(
            f"operation {name!r}: table must be {n} rows of {n} entries"))
        return None
    table = []
    for i, row in enumerate(rows):
        out_row = []
        for j, v in enumerate(row):
            if v == -1:
                out_row.append(None)
            elif isinstance(v, int) and 0 <= v < n:
                out_row.append(v)
            else:
                issues.append(InvalidCap(
                    f"operation {name!r}: entry [{i}][{j}] = {v!r} not in "
                    f"0..{n - 1} (use -1 for undefined)"))
                return None
        table.append(tuple(out_row))
    return CayleyOp(carrier, tuple(table), name)


def _parse_generator(name: str, spec, carriers: Dict[str, Carrier],
                     operations: Dict[str, CayleyOp],
                     issues: List[Exception]) -> Optional[SubsetGenerator]:
    if not isinstance(spec, dict):
        issues.append(ParseError(f"generator {name!r}: expected a table"))
        return None
    form = spec.get("form")
    if isinstance(form, str) and form.startswith("from-op"):
        op_name = form[len("from-op"):].strip()
        if op_name not in operations:
            issues.append(UnresolvedReference(f"generator {name!r}", op_name))
            return None
        return generator_from_op(operations[op_name])
    carrier_name = spec.get("carrier")
    if carrier_name not in carriers:
        issues.append(UnresolvedReference(f"generator {name!r}",
                                          str(carrier_name)))
        return None
    carrier = carriers[carrier_name]
    n = carrier.size
    if form == "identity":
        return SubsetGenerator(carrier, tuple(range(1 << n)), name=name)
    if form == "full":
        full = (1 << n) - 1
        return SubsetGenerator(carrier, (0,) + (full,) * ((1 << n) - 1),
                               name=name)
    subsets = spec.get("table")
    if isinstance(subsets, list) and len(subsets) == (1 << n):
        masks = []
        for i, subset in enumerate(subsets):
            if not isinstance(subset, list) \
                    or any(not isinstance(x, int) or not 0 <= x < n
                           for x in subset):
                issues.append(ParseError(
                    f"generator {name!r}: row {i} must list element indices"))
                return None
            masks.append(sum(1 << x for x in set(subset)))
        try:
            return SubsetGenerator(carrier, tuple(masks), name=name)
        except ValueError as exc:
            issues.append(ParseError(f"generator {name!r}: {exc}"))
            return None
    issues.append(ParseError(
        f"generator {name!r}: expected form 'from-op <op>', 'identity', "
        f"'full', or a table of {1 << n} subsets"))
    return None


def _build_system(section, carriers, operations, generators,
                  issues: List[Exception]) -> Optional[RuleSystem]:
    kind = section.get("kind")
    if kind not in SYSTEM_KINDS:
        issues.append(ParseError(
            f"system.kind must be one of {', '.join(SYSTEM_KINDS)}, "
            f"got {kind!r}"))
        return None
    factor_names = section.get("factors")
    if not isinstance(factor_names, list) or not factor_names:
        issues.append(ParseError("system.factors must list carrier names"))
        return None
    factors = []
    for fname in factor_names:
        if fname not in carriers:
            issues.append(UnresolvedReference("system.factors", str(fname)))
            return None
        factors.append(carriers[fname])
    alphabet = TupleAlphabet(tuple(factors))

    def resolve_ops(names, where) -> Optional[List[CayleyOp]]:
        ops = []
        for oname in names:
            if oname not in operations:
                issues.append(UnresolvedReference(where, str(oname)))
                return None
            ops.append(operations[oname])
        return ops

    if kind == "binary-ops":
        names = section.get("ops")
        if not isinstance(names, list) or len(names) != len(factors):
            issues.append(ParseError("system.ops must name one operation "
                                     "per factor"))
            return None
        ops = resolve_ops(names, "system.ops")
        if ops is None:
            return None
        for op, carrier in zip(ops, factors):
            if op.carrier != carrier:
                issues.append(InvalidCap(
                    f"system.ops: {op.name!r} lives on carrier "
                    f"{op.carrier.name!r}, factor needs {carrier.name!r}"))
                return None
        return compile_from_binary_ops(alphabet, tuple(ops))
    if kind == "op-sets":
        groups = section.get("op_sets")
        if not isinstance(groups, list) or len(groups) != len(factors):
            issues.append(ParseError("system.op_sets must give one list of "
                                     "operation names per factor"))
            return None
        op_sets = []
        for group in groups:
            ops = resolve_ops(group, "system.op_sets")
            if ops is None:
                return None
            op_sets.append(ops)
        return compile_from_op_sets(alphabet, tuple(op_sets))
    if kind == "generators":
        names = section.get("generators")
        if not isinstance(names, list) or len(names) != len(factors):
            issues.append(ParseError("system.generators must name one "
                                     "generator per factor"))
            return None
        gens = []
        for gname in names:
            if gname not in generators:
                issues.append(UnresolvedReference("system.generators",
                                                  str(gname)))
                return None
            gens.append(generators[gname])
        return compile_from_generators(alphabet, tuple(gens))
    relations = section.get("relations")
    if not isinstance(relations, list) or not relations:
        issues.append(ParseError("system.relations must list [left, right] "
                                 "word pairs"))
        return None
    pairs = []
    for i, pair in enumerate(relations):
        if not isinstance(pair, list) or len(pair) != 2:
            issues.append(ParseError(
                f"system.relations[{i}] must be a [left, right] pair"))
            return None
        try:
            left = Word.parse(alphabet, str(pair[0]))
            right = Word.parse(alphabet, str(pair[1]))
        except ParseError as exc:
            issues.append(ParseError(f"system.relations[{i}]: {exc}"))
            return None
        pairs.append((left.entries, right.entries))
    return compile_explicit(alphabet, pairs,
                            detail=str(section.get("detail", "config")))


def _positive(section, key, default, issues, minimum=1) -> int:
    value = section.get(key, default)
    if not isinstance(value, int) or value < minimum:
        issues.append(InvalidCap(f"{key} must be an integer >= {minimum}, "
                                 f"got {value!r}"))
        return default
    return value


def load_config(path: str) -> ExperimentConfig:
    """Parse and fully validate a TOML experiment file.

    Syntax errors raise ParseError immediately; every other problem is
    collected and raised together as one ConfigError, so a bad file is
    fixed in one pass.
    """
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ParseError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return config_from_dict(raw)


def config_from_dict(raw: Dict[str, object]) -> ExperimentConfig:
    issues: List[Exception] = []

    carriers: Dict[str, Carrier] = {}
    for name, spec in (raw.get("carriers") or {}).items():
        if isinstance(spec, int) and spec >= 1:
            carriers[name] = Carrier.ints(name, spec)
        elif isinstance(spec, list) and spec \
                and all(isinstance(e, str) for e in spec):
            try:
                carriers[name] = Carrier(name, tuple(spec))
            except ValueError as exc:
                issues.append(ParseError(f"carrier {name!r}: {exc}"))
        else:
            issues.append(ParseError(
                f"carrier {name!r}: expected a positive size or a list of "
                f"element names"))

    operations: Dict[str, CayleyOp] = {}
    for name, spec in (raw.get("operations") or {}).items():
        if not isinstance(spec, dict):
            issues.append(ParseError(f"operation {name!r}: expected a table"))
            continue
        carrier_name = spec.get("carrier")
        if carrier_name not in carriers:
            issues.append(UnresolvedReference(f"operation {name!r}",
                                              str(carrier_name)))
            continue
        carrier = carriers[carrier_name]
        if "form" in spec:
            op = _parse_op_form(name, str(spec["form"]), carrier, issues)
        elif "table" in spec:
            op = _parse_op_table(name, spec["table"], carrier, issues)
        else:
            issues.append(ParseError(
                f"operation {name!r}: needs either 'form' or 'table'"))
            op = None
        if op is not None:
            operations[name] = op

    generators: Dict[str, SubsetGenerator] = {}
    for name, spec in (raw.get("generators") or {}).items():
        gen = _parse_generator(name, spec, carriers, operations, issues)
        if gen is not None:
            generators[name] = gen

    system = None
    if "system" in raw:
        if isinstance(raw["system"], dict):
            system = _build_system(raw["system"], carriers, operations,
                                   generators, issues)
        else:
            issues.append(ParseError("system must be a table"))

    caps = raw.get("caps") or {}
    cap_len = slack = None
    if "L" in caps:
        cap_len = _positive(caps, "L", 3, issues)
    if "k" in caps:
        slack = _positive(caps, "k", 1, issues, minimum=0)

    budgets = raw.get("budgets") or {}
    node_budget = _positive(budgets, "nodes", DEFAULT_NODE_BUDGET, issues)
    universe_budget = _positive(budgets, "universe", DEFAULT_UNIVERSE_BUDGET,
                                issues)
    env_budget = os.environ.get(UNIVERSE_BUDGET_ENV)
    if env_budget is not None:
        try:
            universe_budget = int(env_budget)
            if universe_budget < 1:
                raise ValueError
        except ValueError:
            issues.append(InvalidCap(
                f"{UNIVERSE_BUDGET_ENV} must be a positive integer, "
                f"got {env_budget!r}"))

    experiment_section = raw.get("experiment")
    experiment = ""
    params: Dict[str, object] = {}
    if not isinstance(experiment_section, dict) \
            or "kind" not in experiment_section:
        issues.append(ParseError("missing [experiment] table with a 'kind'"))
    else:
        experiment = str(experiment_section["kind"])
        if experiment not in EXPERIMENTS:
            issues.append(UnresolvedReference("experiment.kind", experiment))
        params = {k: v for k, v in experiment_section.items() if k != "kind"}

    if issues:
        raise ConfigError(issues)
    return ExperimentConfig(
        experiment=experiment, params=params, carriers=carriers,
        operations=operations, generators=generators, system=system,
        cap_len=cap_len, slack=slack, node_budget=node_budget,
        universe_budget=universe_budget, echo=raw)
