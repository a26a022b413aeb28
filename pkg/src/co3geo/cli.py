"""Command-line interface.

`co3` exposes the verification suites for the degree-276 group plus the
small-group regression corpus, a self-test of the pure-engine oracles,
and utilities to dump order complexes and replay collapse schedules.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 input
or resource error.
"""

from __future__ import annotations

import importlib.resources
import json
import sys
import time

import click

from . import gf2
from .collapse import (CollapseCertificate, NotConeError, NotFreeError,
                       greedy_collapse, replay_schedule)
from .complexes import TypedComplex, order_complex
from .corpus import CORPUS, class_table, poset_summary, small_group
from .radicals import (bouc_poset, distinguished_poset, p_subgroups,
                       quillen_poset)
from .suite import (SUITE_NAMES, CheckResult, SuiteError, SuiteRunner,
                    VerificationReport)

DEFAULT_GENS = "data/co3_generators_276.txt"
DEFAULT_CACHE = ".co3geo-cache"


def common_options(fn):
    fn = click.option("--gens", default=DEFAULT_GENS, show_default=True,
                      help="Generator file for the degree-276 group.")(fn)
    fn = click.option("--seed", default=20070403, show_default=True,
                      help="Seed for all randomized constructions.")(fn)
    fn = click.option("--cache", default=DEFAULT_CACHE, show_default=True,
                      help="Cache directory for derived data.")(fn)
    fn = click.option("--max-mem", default=2048, show_default=True,
                      help="Memory budget in MB.")(fn)
    fn = click.option("--report", "report_path", default=None,
                      help="Write the JSON report to this path.")(fn)
    fn = click.option("--json", "as_json", is_flag=True,
                      help="Print the JSON report to stdout.")(fn)
    fn = click.option("--skip-noncentral", is_flag=True,
                      help="Skip the large non-central involution class "
                           "size check.")(fn)
    return fn


def _emit(report: VerificationReport, report_path, as_json) -> int:
    if report_path:
        with open(report_path, "w") as fh:
            fh.write(report.to_json())
    if as_json:
        click.echo(report.to_json(), nl=False)
    else:
        for line in report.summary_lines():
            click.echo(line)
    return report.exit_code


def _run_suites(suites, gens, seed, cache, max_mem, report_path, as_json,
                skip_noncentral) -> None:
    try:
        runner = SuiteRunner(gens, seed=seed, cache_dir=cache,
                             max_mem_mb=max_mem,
                             with_noncentral=not skip_noncentral)
        report = runner.run(set(suites))
    except SuiteError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    sys.exit(_emit(report, report_path, as_json))


@click.group()
def co3():
    """Verification suites for the 2-local geometry of the degree-276 group."""


def _suite_command(name, suites, doc):
    @co3.command(name=name, help=doc)
    @common_options
    def _cmd(gens, seed, cache, max_mem, report_path, as_json,
             skip_noncentral):
        _run_suites(suites, gens, seed, cache, max_mem, report_path,
                    as_json, skip_noncentral)
    return _cmd


_suite_command("calibrate", ["calibrate"],
               "Identify the group and its involution classes.")
_suite_command("sylow", ["calibrate", "sylow"],
               "Build the Sylow 2-subgroup and census its involutions.")
_suite_command("prop43", ["calibrate", "sylow", "prop43"],
               "Verify the cone-point quadrangle and the matrix model.")
_suite_command("table1", ["calibrate", "sylow", "table1"],
               "Verify orders, centers and normalizers of the candidates.")
_suite_command("table2", ["calibrate", "sylow", "table1", "table2"],
               "Verify orbit decompositions and the collapse schedule.")
_suite_command("axioms", ["calibrate", "sylow", "table1", "axioms"],
               "Check the incidence axioms over the whole point class.")
_suite_command("euler", ["calibrate", "sylow", "table1", "euler"],
               "Compute the reduced Euler characteristic and its 2-part.")
_suite_command("delta-fixed", ["calibrate", "sylow", "table1", "delta-fixed"],
               "Build the involution-fixed subcomplex and collapse it.")
_suite_command("all", SUITE_NAMES, "Run every suite.")


@co3.command("small-groups")
@click.option("--report", "report_path", default=None,
              help="Write the JSON report to this path.")
@click.option("--json", "as_json", is_flag=True,
              help="Print the JSON report to stdout.")
def small_groups(report_path, as_json):
    """Run the S4 / S5 / GL(3,2) regression corpus against golden files."""
    entries = []

    def run(check_id, anchor, expected, fn):
        t0 = time.monotonic()
        try:
            actual = fn()
            status = "pass" if actual == expected else "fail"
        except Exception as e:
            actual, status = f"error: {type(e).__name__}: {e}", "fail"
        entries.append(CheckResult(check_id, anchor, status, expected,
                                   actual,
                                   int((time.monotonic() - t0) * 1000)))

    for name in CORPUS:
        golden = json.loads(importlib.resources.files("co3geo.data")
                            .joinpath(f"smallgroups/{name}.json")
                            .read_text())
        run(f"small-groups.{name}.classes", "claim:small-group-oracles",
            golden, lambda name=name: class_table(name))
    expect = {
        "s4": {"bouc_collapses_to_point": True, "bouc_betti": [0, 0],
               "quillen_matches_bouc": True},
        "s5": {"quillen_matches_bouc": True},
        "gl32": {"bouc_euler": -8, "bouc_betti": [0, 8],
                 "quillen_matches_bouc": True},
    }
    for name, want in expect.items():
        run(f"small-groups.{name}.complexes", "claim:small-group-complexes",
            want, lambda name=name, want=want: {
                k: v for k, v in poset_summary(name).items() if k in want})

    report = VerificationReport(entries=entries,
                                meta={"suites": ["small-groups"]})
    sys.exit(_emit(report, report_path, as_json))


@co3.command()
def selftest():
    """Exercise the pure engines (GF(2), complexes, collapses)."""
    failures = []

    def check(label, ok):
        click.echo(f"[{'ok' if ok else 'FAIL':4s}] {label}")
        if not ok:
            failures.append(label)

    check("rank-2 square-zero matrix census is 10",
          len(gf2.enumerate_rank2_squarezero()) == 10)
    check("unipotent relation table holds", gf2.u4_relations_check()["ok"])
    check("reference matrices match the census",
          set(gf2.NILPOTENT_RANK2) == set(gf2.enumerate_rank2_squarezero()))

    # a solid triangle collapses to a point and replays to the same hash
    C = TypedComplex()
    C.add_simplex((0, 1, 2))
    cert = greedy_collapse(C)
    check("solid triangle collapses to a point", cert.complete)
    D = TypedComplex()
    D.add_simplex((0, 1, 2))
    out = replay_schedule(D, cert.format())
    check("certificate replays to the same hash",
          out.terminal_hash == cert.terminal_hash)

    # a hollow triangle does not collapse and has Betti (0, 1)
    H = TypedComplex()
    for e in ((0, 1), (1, 2), (0, 2)):
        H.add_simplex(e)
    check("hollow triangle is recognized as a circle",
          not greedy_collapse(H).complete)
    H2 = TypedComplex()
    for e in ((0, 1), (1, 2), (0, 2)):
        H2.add_simplex(e)
    check("circle has reduced Betti (0, 1)", H2.reduced_betti() == [0, 1])

    sys.exit(1 if failures else 0)


@co3.command("dump-complex")
@click.option("--group", "name", type=click.Choice(CORPUS), required=True)
@click.option("--collection",
              type=click.Choice(["bouc", "quillen", "distinguished"]),
              default="bouc", show_default=True)
@click.option("-o", "--output", type=click.File("w"), default="-")
def dump_complex(name, collection, output):
    """Dump the order complex of a small-group subgroup poset."""
    group = small_group(name)
    records = p_subgroups(group, 2)
    poset = {"bouc": bouc_poset, "quillen": quillen_poset,
             "distinguished": distinguished_poset}[collection](
        group, 2, records)
    output.write(order_complex(poset).dump())


@co3.command()
@click.argument("complex_file", type=click.File("r"))
@click.option("--schedule", "schedule_file", type=click.File("r"),
              default=None,
              help="Replay this certificate instead of collapsing greedily.")
def collapse(complex_file, schedule_file):
    """Collapse a dumped complex, or replay a schedule against it."""
    try:
        C = TypedComplex.load(complex_file.read())
    except (ValueError, KeyError) as e:
        click.echo(f"error: bad complex file: {e}", err=True)
        sys.exit(2)
    if schedule_file is None:
        cert = greedy_collapse(C)
        click.echo(cert.format(), nl=False)
        sys.exit(0 if cert.complete else 1)
    try:
        out = replay_schedule(C, schedule_file.read())
    except (NotFreeError, NotConeError, ValueError) as e:
        click.echo(f"error: replay failed: {e}", err=True)
        sys.exit(1)
    click.echo(f"replayed {len(out.steps)} steps; "
               f"terminal hash {out.terminal_hash}")
    sys.exit(0)


def main():
    co3(prog_name="co3")


if __name__ == "__main__":
    main()
