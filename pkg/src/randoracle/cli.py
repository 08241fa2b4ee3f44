"""Command-line front end: problem ingestion, runs, and report emission.

Exit status: 0 completed, 1 invalid input, 2 cap refusal, 3 expectation
mismatch or internal identity failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import separations
from .config import override_caps
from .core.perms import Permutation
from .errors import CapExceeded, ContractViolation, DefectError, SchemaError
from .oracle import (
    IID,
    SHARED,
    JointSeeds,
    OracleProblem,
    RandomizedOracle,
    SeedDistribution,
    make_hls_oracle,
    make_shift_oracle,
    make_simon_oracle,
    make_standard_xor_oracle,
)
from .core.perms import enumerate_fixed_point_free_involutions, enumerate_full_cycles
from .quantum import helstrom_advantage, run_inv_cyc_algorithm
from .uselessness import (
    pairwise_classical_useless,
    quantum_useless,
    sigmas,
    strong_classical_useless,
    weak_classical_useless,
)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3


def load_schema(name: str) -> dict:
    return json.loads(resources.files("randoracle").joinpath("schemas", name).read_text())


# -- fractions in documents ---------------------------------------------------

def parse_fraction(text: str, path: str = "/") -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{text!r} is not a fraction p/q", path) from None


def fraction_doc(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _restore(obj):
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        return Fraction(obj["num"], obj["den"])
    return obj


def jsonable(value):
    """Canonical JSON form: fractions as {num, den}, tuples as lists."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return fraction_doc(value)
    if isinstance(value, float):
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, Permutation):
        return list(value.images)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    return json.loads(text, object_hook=_restore)


# -- problem specs --------------------------------------------------------------

def _validate(doc, schema_name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise SchemaError(err.message, path)


def _read_document(source) -> dict:
    if isinstance(source, dict):
        return source
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read problem file: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def _build_constructor_problem(c: dict) -> OracleProblem:
    name = c["name"]
    if name == "inv-cyc":
        return separations.inv_cyc_problem(c.get("N", 4))
    if name == "parity":
        skew = parse_fraction(c["skew"], "/constructor/skew") if "skew" in c else None
        return separations.parity_problem(c.get("N", 4), skew)
    if name == "balanced-binary":
        return separations.balanced_binary_problem()
    if name == "simon":
        return separations.simon_problem(c.get("n", 2))
    return separations.hls_problem(c.get("n", 2))


def _perm(images, path) -> Permutation:
    try:
        return Permutation(tuple(images))
    except ContractViolation as exc:
        raise SchemaError(str(exc), path) from None


def _build_oracle(entry: dict, i: int, doc: dict) -> RandomizedOracle:
    path = f"/oracles/{i}"
    name = entry.get("name", "")
    if "constructor" in entry:
        c = entry["constructor"]
        kind = c["name"]
        if kind == "shift-oracle":
            if "class" not in c or "N" not in c:
                raise SchemaError("shift-oracle needs 'class' and 'N'", path + "/constructor")
            family = (enumerate_fixed_point_free_involutions if c["class"] == "INV"
                      else enumerate_full_cycles)(c["N"])
            return make_shift_oracle(family, name or c["class"])
        if kind == "xor-function":
            if "values" not in c or "M" not in c:
                raise SchemaError("xor-function needs 'values' and 'M'", path + "/constructor")
            return make_standard_xor_oracle([c["values"]], c["M"], seeds=(0,), name=name)
        if kind == "simon":
            return make_simon_oracle(c.get("n", 2), c.get("a", 1), mode="enumerate", name=name)
        return make_hls_oracle(c.get("n", 2), c.get("s", 0), mode="enumerate", name=name)
    if "permutations" in entry:
        perms = [_perm(p, f"{path}/permutations/{x}") for x, p in enumerate(entry["permutations"])]
        return RandomizedOracle.deterministic(perms, name)
    if "seeds" not in doc:
        raise SchemaError("explicit action tables need top-level 'seeds'", path)
    seeds = tuple(_hashable(s) for s in doc["seeds"])
    weights = ([parse_fraction(w, f"/seed_weights/{s}") for s, w in enumerate(doc["seed_weights"])]
               if "seed_weights" in doc else [Fraction(1, len(seeds))] * len(seeds))
    actions = [[_perm(p, f"{path}/actions/{s}/{x}") for x, p in enumerate(row)]
               for s, row in enumerate(entry["actions"])]
    if len(actions) != len(seeds):
        raise SchemaError(f"needs one action row per seed ({len(seeds)})", path + "/actions")
    N = len(actions[0])
    return RandomizedOracle(N, actions[0][0].M, seeds, weights, actions, name)


def _hashable(v):
    return tuple(_hashable(x) for x in v) if isinstance(v, list) else v


def _joint(doc: dict) -> JointSeeds:
    model = doc.get("seed_model", {"kind": "iid"})
    if model["kind"] == "iid":
        return IID
    if model["kind"] == "shared":
        return SHARED
    tables = {}
    for key, rows in model.get("tables", {}).items():
        base = f"/seed_model/tables/{key}"
        support = tuple(tuple(_hashable(s) for s in r["seeds"]) for r in rows)
        weights = [parse_fraction(r["weight"], f"{base}/{t}/weight") for t, r in enumerate(rows)]
        total = sum(weights, Fraction(0))
        if total != 1:
            raise SchemaError(f"seed table weights sum to {total}; deficit {1 - total}", base)
        if any(len(t) != int(key) for t in support):
            raise SchemaError(f"seed tuples must have length {key}", base)
        tables[int(key)] = SeedDistribution(support, weights)
    if not tables:
        raise SchemaError("explicit seed model needs tables", "/seed_model")
    return JointSeeds.explicit(tables)


def parse_problem_spec(document) -> OracleProblem:
    """Validate a problem document (dict, JSON text, or file path) and build the problem."""
    doc = _read_document(document)
    _validate(doc, "problem.schema.json")
    if "constructor" in doc:
        problem = _build_constructor_problem(doc["constructor"])
        if "prior" in doc:
            problem = problem.with_class_prior(_class_prior(doc["prior"], problem.class_labels))
        return problem
    oracles = [_build_oracle(e, i, doc) for i, e in enumerate(doc["oracles"])]
    classes = [e["class"] for e in doc["oracles"]]
    for key in ("N", "M"):
        if key in doc and any(getattr(o, key) != doc[key] for o in oracles):
            raise SchemaError(f"an oracle disagrees with the declared {key}={doc[key]}", f"/{key}")
    labels = list(dict.fromkeys(classes))
    joint = _joint(doc)
    prior = doc.get("prior")
    if isinstance(prior, list):
        if len(prior) != len(oracles):
            raise SchemaError(f"prior needs {len(oracles)} entries", "/prior")
        weights = [parse_fraction(p, f"/prior/{i}") for i, p in enumerate(prior)]
        _check_sum(weights, "/prior")
        return OracleProblem.build(oracles, classes, weights, joint)
    members = {c: [o for o, oc in zip(oracles, classes) if oc == c] for c in labels}
    class_prior = _class_prior(prior, labels) if prior is not None else None
    return OracleProblem.from_classes(members, class_prior, joint)


def _check_sum(weights, path):
    total = sum(weights, Fraction(0))
    if total != 1:
        raise SchemaError(f"prior sums to {total}, not 1 (deficit {1 - total})", path)


def _class_prior(prior: dict, labels) -> dict:
    if not isinstance(prior, dict):
        raise SchemaError("constructor problems take a class prior object", "/prior")
    unknown = set(prior) - set(labels)
    if unknown:
        raise SchemaError(f"unknown classes {sorted(unknown)}", "/prior")
    missing = [c for c in labels if c not in prior]
    if missing:
        raise SchemaError(f"missing classes {missing}", "/prior")
    out = {c: parse_fraction(prior[c], f"/prior/{c}") for c in labels}
    _check_sum(out.values(), "/prior")
    if any(v <= 0 for v in out.values()):
        raise SchemaError("class priors must be positive", "/prior")
    return out


# -- runs -----------------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    problem: Any = None
    scenario: str | None = None
    kind: str = "weak"
    N: int | None = None
    n: int | None = None
    k: int | None = None
    pairs: int | None = None
    T: int | None = None
    trials: int = 0
    rng_seed: int | None = None
    workers: int = 1
    max_dim: int | None = None
    skew: str | None = None
    check: bool = False
    fmt: str = "document"
    timing: bool = False
    inputs: list[str] = field(default_factory=list)

    def echo(self) -> dict:
        keys = ("problem", "scenario", "kind", "N", "n", "k", "pairs", "T", "trials",
                "rng_seed", "workers", "skew", "check")
        out = {}
        for key in keys:
            v = getattr(self, key)
            if key == "kind" and self.command != "decide":
                continue
            if v not in (None, False) and not (key == "workers" and v == 1):
                out[key] = v if not isinstance(v, dict) else "<inline>"
        return out


class Report:
    def __init__(self, config: RunConfig):
        self.doc = {"command": config.command, "inputs": config.echo(), "verdicts": [],
                    "probabilities": [], "witnesses": [], "expectations": [], "notes": [],
                    "timing_ms": None}
        if config.max_dim is not None:
            self.doc["caps"] = {"state_dim": config.max_dim}

    def verdict(self, v, label=None):
        entry = {"kind": v.kind, "k": v.k, "classical_queries": v.classical_queries,
                 "useless": v.useless, "witness": None}
        if label:
            entry["label"] = label
        if v.witness is not None:
            w = v.witness
            wd = {"class": w.j, "reference": w.reference, "p_class": w.p_j,
                  "p_reference": w.p_reference}
            if w.queries is not None:
                wd.update(x=w.queries.x, y=w.queries.y, z=w.z)
            if w.seed is not None:
                wd["seed"] = w.seed
            if w.entry is not None:
                wd["entry"] = w.entry
            if w.note:
                wd["note"] = w.note
            entry["witness"] = len(self.doc["witnesses"])
            self.doc["witnesses"].append(wd)
        self.doc["verdicts"].append(entry)

    def probability(self, name, value, **extra):
        entry = {"name": name, "value": value, **extra}
        if isinstance(value, float):
            entry["approximate"] = True
        self.doc["probabilities"].append(entry)

    def expectation(self, r):
        self.doc["expectations"].append({"name": r.name, "expected": r.expected,
                                         "actual": r.actual, "passed": r.passed,
                                         "source": r.source})


def _scenario(config: RunConfig) -> separations.Scenario:
    name = config.scenario
    if name is None:
        raise ContractViolation("no scenario given")
    if name == "inv-cyc":
        return separations.scenario_inv_cyc(config.N or 4)
    if name == "parity":
        skew = parse_fraction(config.skew) if config.skew else None
        return separations.scenario_parity(config.N or 4, skew)
    if name == "balanced-binary":
        return separations.scenario_balanced_binary()
    if name == "simon":
        seed = 0 if config.rng_seed is None else config.rng_seed
        return separations.scenario_simon(config.n or 2, config.trials or 100, seed)
    if name == "hls":
        return separations.scenario_hls(config.n or 2)
    if name == "amplified":
        return separations.scenario_amplified(separations.scenario_inv_cyc(config.N or 4),
                                              config.k or 1)
    if name == "bounded-error":
        return separations.scenario_bounded_error(separations.scenario_inv_cyc(config.N or 4),
                                                  config.T or 7)
    raise ContractViolation(f"unknown scenario {name!r}")


def _problem(config: RunConfig) -> OracleProblem:
    if config.problem is not None:
        return parse_problem_spec(config.problem)
    problem = _scenario(config).problem
    if not isinstance(problem, OracleProblem):
        if problem is None:
            raise ContractViolation(f"scenario {config.scenario!r} has no explicit problem here")
        problem = problem.materialize()
    return problem


DECIDERS = {"weak": weak_classical_useless, "strong": strong_classical_useless,
            "pairwise": pairwise_classical_useless}


def _cmd_decide(config, report) -> int:
    problem = _problem(config)
    k = config.pairs if config.kind == "pairwise" and config.pairs else config.k
    if k is None:
        raise ContractViolation("--k (or --pairs) is required")
    if config.kind == "quantum":
        v = quantum_useless(problem, k)
    elif config.kind in DECIDERS:
        v = DECIDERS[config.kind](problem, k, workers=config.workers)
    else:
        raise ContractViolation(f"unknown kind {config.kind!r}")
    report.verdict(v)
    if config.check and config.scenario:
        return _check_verdict(config, report, v)
    return EXIT_OK


def _check_verdict(config, report, v) -> int:
    sc = _scenario(config)
    names = {f"{v.kind} k={v.k} useless", f"{v.kind} {v.k} pair useless",
             f"{v.kind} {v.k} pairs useless"}
    status = EXIT_OK
    for e in sc.expectations:
        if e.name in names:
            r = separations.ExpectationResult(e.name, e.expected, v.useless, e.source)
            report.expectation(r)
            if not r.passed:
                status = EXIT_MISMATCH
    return status


def _child_seed(rng_seed: int, i: int) -> int:
    return int(np.random.SeedSequence(rng_seed, spawn_key=(i,)).generate_state(1)[0])


def _cmd_simulate(config, report) -> int:
    if config.trials > 0 and config.rng_seed is None:
        raise ContractViolation("--rng-seed is required whenever --trials > 0")
    name = config.scenario
    if name == "inv-cyc":
        problem = separations.inv_cyc_problem(config.N or 4)
        for i, j in enumerate(problem.class_labels):
            (idx, _), = problem.members(j)
            oracle = problem.oracles[idx]
            exact = run_inv_cyc_algorithm(oracle).p_symmetric
            report.probability("p_symmetric", exact, **{"class": j})
            if config.trials > 0:
                res = run_inv_cyc_algorithm(oracle, "sampled", config.trials,
                                            _child_seed(config.rng_seed, i))
                report.probability("p_symmetric_sampled",
                                   Fraction(res.guesses["INV"], config.trials),
                                   **{"class": j, "trials": config.trials})
        return EXIT_OK
    if name == "simon":
        n = config.n or 3
        trials = config.trials or 100
        seed = 0 if config.rng_seed is None else config.rng_seed
        wins = separations.simon_success(n, trials, seed)
        report.probability("solver_success", Fraction(wins, trials), trials=trials)
        return EXIT_OK
    raise ContractViolation(f"no simulator for scenario {name!r} (use inv-cyc or simon)")


def _cmd_encode(config, report) -> int:
    problem = _problem(config)
    k = config.k or 1
    mats = sigmas(problem, k)
    labels = list(mats)
    for j, rho in mats.items():
        report.probability("trace", rho.trace(), **{"class": j, "dim": rho.dim,
                                                   "nonzeros": rho.matrix.nnz()})
    v = quantum_useless(problem, k)
    report.verdict(v)
    if len(labels) == 2:
        p0, p1 = problem.class_prior(labels[0]), problem.class_prior(labels[1])
        adv = helstrom_advantage(mats[labels[0]], mats[labels[1]], p0, p1)
        report.probability("helstrom_advantage", float(adv))
    return EXIT_OK


def _run_scenario(sc, config, report) -> int:
    report.doc["inputs"]["scenario_name"] = sc.name
    status = EXIT_OK
    for r in sc.check():
        report.expectation(r)
        if config.check and not r.passed:
            status = EXIT_MISMATCH
    return status


def _cmd_amplify(config, report) -> int:
    base = separations.scenario_inv_cyc(config.N or 4) if config.scenario in (None, "inv-cyc") \
        else _scenario(config)
    if config.T:
        return _run_scenario(separations.scenario_bounded_error(base, config.T), config, report)
    return _run_scenario(separations.scenario_amplified(base, config.k or 1), config, report)


def _cmd_scenario(config, report) -> int:
    return _run_scenario(_scenario(config), config, report)


def _cmd_report(config, report) -> int:
    if not config.inputs:
        raise ContractViolation("report needs at least one --input file")
    for path in config.inputs:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read report {path}: {exc}") from None
        _validate(raw, "report.schema.json")
        doc = loads(json.dumps(raw))
        for key in ("verdicts", "probabilities", "expectations"):
            report.doc[key].extend(doc.get(key, []))
        report.doc["witnesses"].extend(doc.get("witnesses", []))
    return EXIT_OK


COMMANDS = {"decide": _cmd_decide, "simulate": _cmd_simulate, "encode": _cmd_encode,
            "amplify": _cmd_amplify, "scenario": _cmd_scenario, "report": _cmd_report}


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report document)."""
    report = Report(config)
    start = time.perf_counter()
    try:
        cm = override_caps(state_dim=config.max_dim) if config.max_dim else contextlib.nullcontext()
        with cm:
            status = COMMANDS[config.command](config, report)
    except SchemaError as exc:
        report.doc["notes"].append(f"invalid input: {exc}")
        status = EXIT_INPUT
    except CapExceeded as exc:
        report.doc["notes"].append(f"refused: {exc}")
        status = EXIT_CAP
    except DefectError as exc:
        report.doc["notes"].append(f"defect: {exc}")
        status = EXIT_MISMATCH
    except (ContractViolation, KeyError) as exc:
        report.doc["notes"].append(f"invalid input: {exc}")
        status = EXIT_INPUT
    if config.timing:
        report.doc["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    report.doc["exit_status"] = status
    return status, report.doc


# -- rendering ------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return f"~{v:.6g}"
    if isinstance(v, dict):
        return "; ".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def render_rows(doc: dict) -> str:
    """Comma-separated rows: section, name, value, details."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "name", "value", "detail"])
    for v in doc["verdicts"]:
        w.writerow(["verdict", f"{v['kind']} k={v['k']}", "useless" if v["useless"] else "useful",
                    "" if v["witness"] is None else _cell(doc["witnesses"][v["witness"]])])
    for p in doc["probabilities"]:
        extra = {k: x for k, x in p.items() if k not in ("name", "value")}
        w.writerow(["probability", p["name"], _cell(p["value"]), _cell(extra)])
    for e in doc.get("expectations", []):
        w.writerow(["expectation", e["name"], "pass" if e["passed"] else "FAIL",
                    f"expected={_cell(e['expected'])}; actual={_cell(e['actual'])}"])
    for note in doc.get("notes", []):
        w.writerow(["note", "", "", note])
    return buf.getvalue()


def render_table(doc: dict) -> str:
    rows = list(csv.reader(io.StringIO(render_rows(doc))))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = ["  ".join(c.ljust(wd) for c, wd in zip(r, widths)).rstrip() for r in rows]
    lines.append("(values prefixed with ~ are decimal approximations)")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "document":
        return dumps(doc)
    if fmt == "rows":
        return render_rows(doc)
    return render_table(doc)


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randoracle",
                                     description="Exact deciders and simulators for randomized oracles.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", help="problem document: file path or inline JSON")
    common.add_argument("--scenario", "--name", dest="scenario", help="named scenario")
    common.add_argument("--N", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--pairs", type=int)
    common.add_argument("--T", type=int)
    common.add_argument("--trials", type=int, default=0)
    common.add_argument("--rng-seed", type=int)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--max-dim", type=int, help="override the exact-state dimension cap")
    common.add_argument("--skew", help="parity within-class skew as p/q")
    common.add_argument("--format", dest="fmt", choices=["table", "rows", "document"],
                        default="document")
    common.add_argument("--check", action="store_true", help="exit 3 on expectation mismatch")
    common.add_argument("--timing", action="store_true", help="record wall time in the report")
    common.add_argument("--output", help="write the report here instead of stdout")
    for name, text in (("decide", "run a uselessness decider"),
                       ("simulate", "run the quantum algorithms"),
                       ("encode", "build class-averaged encodings"),
                       ("amplify", "amplified and batched variants"),
                       ("scenario", "evaluate a named scenario"),
                       ("report", "validate and re-render saved reports")):
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "decide":
            p.add_argument("--kind", choices=["weak", "strong", "pairwise", "quantum"],
                           default="weak")
        if name == "report":
            p.add_argument("--input", dest="inputs", action="append", default=[])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    output = opts.pop("output")
    config = RunConfig(**opts)
    status, doc = run(config)
    text = render(doc, config.fmt)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
