"""Committed multi-step runs with a single aggregated summary.

A pipeline config is a JSON object {"steps": [...]} where each step has
a name, a CLI argv list, and declared inputs/outputs. Path-valued
entries use the "{out}" placeholder for the output directory and
"{threads}" for the worker cap. Inputs are checked up front against
earlier outputs: a dangling reference aborts with exit 2 before any
step runs, so a broken pipeline leaves no partial summary.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from typing import Optional

from .reports import (
    all_passed,
    assertion,
    build_report,
    comparable_bytes,
    load_report,
    write_report,
)

SUMMARY_NAME = "pipeline_summary.json"

# The committed n=4 reproduction pipeline: oracles, tables,
# verifications, demos, experiments. Every assertion in every step is
# expected to pass, and a rerun must reproduce every artifact byte for
# byte (report timestamps aside) at any thread count.
STANDARD_N4 = {
    "steps": [
        {
            "name": "oracle-n4-cond",
            "argv": [
                "oracle", "build", "--n", "4", "--conditions", "all",
                "--l-max", "8", "--out", "{out}/oracle_n4_cond.json",
            ],
            "inputs": [],
            "outputs": ["{out}/oracle_n4_cond.json"],
        },
        {
            "name": "oracle-n8-pairs",
            "argv": [
                "oracle", "build", "--n", "8", "--conditions", "lambda",
                "--l-max", "16", "--out", "{out}/oracle_n8_pairs.json",
            ],
            "inputs": [],
            "outputs": ["{out}/oracle_n8_pairs.json"],
        },
        {
            "name": "oracle-m2-out",
            "argv": [
                "oracle", "build", "--n", "2", "--conditions", "lambda",
                "--l-max", "4", "--out", "{out}/oracle_m2_out.json",
            ],
            "inputs": [],
            "outputs": ["{out}/oracle_m2_out.json"],
        },
        {
            "name": "oracle-m2-cond4",
            "argv": [
                "oracle", "build", "--n", "2", "--conditions", "all:4",
                "--l-max", "6", "--out", "{out}/oracle_m2_cond4.json",
            ],
            "inputs": [],
            "outputs": ["{out}/oracle_m2_cond4.json"],
        },
        {
            "name": "gen-ip4",
            "argv": [
                "table", "gen", "--kind", "inner-product", "--n", "4",
                "--out", "{out}/ip4.kext",
            ],
            "inputs": [],
            "outputs": ["{out}/ip4.kext"],
        },
        {
            "name": "gen-gf4",
            "argv": [
                "table", "gen", "--kind", "gf2", "--n", "4", "--m", "2",
                "--out", "{out}/gf4.kext",
            ],
            "inputs": [],
            "outputs": ["{out}/gf4.kext"],
        },
        {
            "name": "gen-rnd4",
            "argv": [
                "table", "gen", "--kind", "random", "--n", "4", "--m", "2",
                "--seed", "1", "--out", "{out}/rnd4.kext",
            ],
            "inputs": [],
            "outputs": ["{out}/rnd4.kext"],
        },
        {
            "name": "gen-trunc4",
            "argv": [
                "table", "gen", "--kind", "truncate", "--n", "4", "--m", "2",
                "--out", "{out}/trunc4.kext",
            ],
            "inputs": [],
            "outputs": ["{out}/trunc4.kext"],
        },
        {
            "name": "verify-ip4-almost",
            "argv": [
                "table", "verify", "--table", "{out}/ip4.kext",
                "--mode", "almost", "--k", "3", "--d", "0",
                "--eps", "0.25", "--u-size", "1",
                "--threads", "{threads}",
                "--out", "{out}/verify_ip4_almost.json",
            ],
            "inputs": ["{out}/ip4.kext"],
            "outputs": ["{out}/verify_ip4_almost.json"],
        },
        {
            "name": "eps-star-ip4",
            "argv": [
                "table", "eps-star", "--table", "{out}/ip4.kext",
                "--k", "3", "--d", "0", "--threads", "{threads}",
                "--out", "{out}/eps_star_ip4.json",
            ],
            "inputs": ["{out}/ip4.kext"],
            "outputs": ["{out}/eps_star_ip4.json"],
        },
        {
            "name": "verify-rnd4-rainbow",
            "argv": [
                "table", "verify", "--table", "{out}/rnd4.kext",
                "--mode", "rainbow", "--side", "4", "--divisor", "2",
                "--out", "{out}/verify_rnd4_rainbow.json",
            ],
            "inputs": ["{out}/rnd4.kext"],
            "outputs": ["{out}/verify_rnd4_rainbow.json"],
        },
        {
            "name": "search-rainbow",
            "argv": [
                "table", "search", "--n", "4", "--m", "2", "--side", "8",
                "--divisor", "2", "--seed", "1", "--max-trials", "4",
                "--table-out", "{out}/rainbow_found.kext",
                "--out", "{out}/search_rainbow.json",
            ],
            "inputs": [],
            "outputs": ["{out}/search_rainbow.json", "{out}/rainbow_found.kext"],
        },
        {
            "name": "extract-check-rnd4",
            "argv": [
                "extract", "check", "--table", "{out}/rnd4.kext",
                "--cond-oracle", "{out}/oracle_n4_cond.json",
                "--output-oracle", "{out}/oracle_m2_out.json",
                "--k", "3", "--alpha", "2", "--require-d", "0",
                "--out", "{out}/extract_check_rnd4.json",
            ],
            "inputs": [
                "{out}/rnd4.kext",
                "{out}/oracle_n4_cond.json",
                "{out}/oracle_m2_out.json",
            ],
            "outputs": ["{out}/extract_check_rnd4.json"],
        },
        {
            "name": "demo-popular",
            "argv": [
                "demo", "popular", "--table", "{out}/trunc4.kext",
                "--oracle", "{out}/oracle_n4_cond.json",
                "--out", "{out}/demo_popular.json",
            ],
            "inputs": ["{out}/trunc4.kext", "{out}/oracle_n4_cond.json"],
            "outputs": ["{out}/demo_popular.json"],
        },
        {
            "name": "demo-curse",
            "argv": [
                "demo", "curse", "--table", "{out}/rnd4.kext", "--alpha", "1",
                "--pair-oracle", "{out}/oracle_n8_pairs.json",
                "--output-oracle", "{out}/oracle_m2_out.json",
                "--out", "{out}/demo_curse.json",
            ],
            "inputs": [
                "{out}/rnd4.kext",
                "{out}/oracle_n8_pairs.json",
                "{out}/oracle_m2_out.json",
            ],
            "outputs": ["{out}/demo_curse.json"],
        },
        {
            "name": "demo-vv",
            "argv": [
                "demo", "vv", "--oracle", "{out}/oracle_m2_cond4.json",
                "--advice", "1", "--n", "4", "--m", "2",
                "--out", "{out}/demo_vv.json",
            ],
            "inputs": ["{out}/oracle_m2_cond4.json"],
            "outputs": ["{out}/demo_vv.json"],
        },
        {
            "name": "exp-dep-census",
            "argv": [
                "exp", "dep-census", "--oracle", "{out}/oracle_n4_cond.json",
                "--alpha", "2", "--max-c", "0.0",
                "--csv", "{out}/census_n4_a2.csv",
                "--out", "{out}/exp_dep_census.json",
            ],
            "inputs": ["{out}/oracle_n4_cond.json"],
            "outputs": ["{out}/exp_dep_census.json", "{out}/census_n4_a2.csv"],
        },
        {
            "name": "exp-hitting",
            "argv": [
                "exp", "hitting", "--table", "{out}/rnd4.kext",
                "--cond-oracle", "{out}/oracle_n4_cond.json",
                "--output-oracle", "{out}/oracle_m2_out.json",
                "--k", "3", "--alpha", "2", "--set-popular-row", "0",
                "--out", "{out}/exp_hitting.json",
            ],
            "inputs": [
                "{out}/rnd4.kext",
                "{out}/oracle_n4_cond.json",
                "{out}/oracle_m2_out.json",
            ],
            "outputs": ["{out}/exp_hitting.json"],
        },
    ]
}


def _template(text: str, out_dir: str, threads: int) -> str:
    return text.replace("{out}", out_dir).replace("{threads}", str(threads))


def load_config(config_path: Optional[str], standard: Optional[str]) -> dict:
    if (config_path is None) == (standard is None):
        raise ValueError("pass exactly one of --config / --standard")
    if standard is not None:
        if standard != "n4":
            raise ValueError(f"unknown standard pipeline {standard!r}")
        return STANDARD_N4
    with open(config_path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def preflight(config: dict, out_dir: str, threads: int) -> list[dict]:
    """Resolve templates and check the input/output dependency chain."""
    steps = []
    produced: set[str] = set()
    for raw in config["steps"]:
        step = {
            "name": raw["name"],
            "argv": [_template(a, out_dir, threads) for a in raw["argv"]],
            "inputs": [_template(p, out_dir, threads) for p in raw.get("inputs", [])],
            "outputs": [_template(p, out_dir, threads) for p in raw.get("outputs", [])],
        }
        for path in step["inputs"]:
            if path not in produced and not os.path.exists(path):
                raise FileNotFoundError(
                    f"step {step['name']!r} needs {path}, which no earlier "
                    "step produces and which does not exist"
                )
        produced.update(step["outputs"])
        steps.append(step)
    return steps


def run_pipeline(
    config_path: Optional[str],
    standard: Optional[str],
    out_dir: str,
    threads: int = 1,
    override: bool = False,
) -> int:
    from .cli import dispatch

    try:
        config = load_config(config_path, standard)
        os.makedirs(out_dir, exist_ok=True)
        steps = preflight(config, out_dir, threads)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    results = []
    for step in steps:
        argv = list(step["argv"])
        if override and argv[0] in ("table", "extract"):
            argv.append("--override-feasibility")
        print(f"== step {step['name']}")
        code = dispatch(argv)
        if code == 2:
            print(f"error: step {step['name']!r} failed with usage/feasibility error",
                  file=sys.stderr)
            return 2
        results.append({"name": step["name"], "exit_code": code})

    checks = [
        assertion(f"step_{r['name']}", r["exit_code"] == 0, r["exit_code"])
        for r in results
    ]
    summary = build_report(
        "pipeline run",
        {"standard": standard, "config": config_path, "steps": len(steps)},
        {"results": results},
        checks,
    )
    summary_path = os.path.join(out_dir, SUMMARY_NAME)
    write_report(summary, summary_path)
    print(f"[pipeline run] {len(steps)} steps -> {summary_path}")
    return 0 if all_passed(summary) else 1


def artifact_digests(out_dir: str) -> dict[str, str]:
    """sha256 per artifact, with report timestamps excluded.

    Files carrying a report envelope are canonicalized through
    comparable_bytes first; all other files digest raw.
    """
    digests = {}
    for name in sorted(os.listdir(out_dir)):
        path = os.path.join(out_dir, name)
        if not os.path.isfile(path):
            continue
        if name.endswith(".json"):
            try:
                doc = load_report(path)
            except json.JSONDecodeError:
                doc = None
            if isinstance(doc, dict) and "schema_version" in doc and "generated_at" in doc:
                digests[name] = hashlib.sha256(comparable_bytes(path)).hexdigest()
                continue
        with open(path, "rb") as fh:
            digests[name] = hashlib.sha256(fh.read()).hexdigest()
    return digests
