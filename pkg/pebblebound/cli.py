"""
pebblebound/cli.py
Command-line interface: pebbling oracle, product bounds, reproduction of the
reference tables and LP export.
"""

import sys
import time
import logging
import argparse


def _load_overrides(args):
    """name -> profile from --profile-override ('published' or a profile file), or {}."""
    from pathlib import Path
    from pebblebound.profiles import load_profiles
    from pebblebound.reference import published_profiles

    if not args.profile_override:
        return {}
    if args.profile_override == 'published':
        return published_profiles()
    return load_profiles(Path(args.profile_override))


def _profile_for(g, overrides, args):
    """Override when present, otherwise derived by the oracle."""
    from pebblebound.constants import ORACLE_VERTEX_CAP
    from pebblebound.errors import ConfigurationError
    from pebblebound.oracle import two_pebbling_tables

    if g.name in overrides:
        profile = overrides[g.name]
        logging.debug(f"Profile for {g.name} from {profile.source}: pi = {profile.pi}")
        return profile
    if g.vertex_count > ORACLE_VERTEX_CAP:
        raise ConfigurationError(
            f"{g.name} has {g.vertex_count} vertices, above the oracle cap {ORACLE_VERTEX_CAP}; "
            f"pass --profile-override with a profile for it"
        )
    logging.info(f"Deriving the pebbling profile of [cyan]{g.name}[/cyan] with the oracle...")
    return two_pebbling_tables(g, workers=args.jobs)


def _profile_digest(*profiles) -> str:
    import json
    import hashlib
    text = json.dumps([p.to_dict() for p in profiles], sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def _bound_instance(inst, policy, args, cache, time_limit, jobs):
    """SearchReport for one instance, replayed from the cache when possible."""
    from pebblebound.report import ResultsCache
    from pebblebound.search import parse_gap_schedule, run_algorithm1
    from pebblebound.solvers import select_backend

    solver_id = select_backend(args.solver)
    schedule = parse_gap_schedule(args.gap_schedule)
    key = ResultsCache.key(inst.g.name, inst.h.name, "orbit:" + ",".join(str(g) for g in schedule),
                           policy.digest, solver_id, _profile_digest(inst.g_profile, inst.h_profile))
    if cache is not None:
        cached = cache.get(inst.g.name, inst.h.name, key)
        if cached is not None:
            logging.info(f"[dim]cached[/dim] {inst.name}: bound {cached.final_bound}")
            return cached
    report = run_algorithm1(inst, policy, schedule, solver_id, args.workdir / "solves", jobs, time_limit)
    if cache is not None:
        cache.put(inst.g.name, inst.h.name, key, report)
    return report


def pi(args):
    """
    Pebbling number of one graph by exhaustive search, with a witness.
    """
    from pebblebound.graphs import resolve_graph
    from pebblebound.oracle import pebbling_witness

    g = resolve_graph(args.graph)
    logging.info(f"[bold cyan]PI Mode[/bold cyan] - [white]{g.name}[/white]\n" + "=" * 50)
    start = time.perf_counter()
    witness = pebbling_witness(g, workers=args.jobs)
    elapsed = time.perf_counter() - start
    logging.info(f"pi({g.name}) = [bold]{witness.pi}[/bold]")
    logging.info(f"Unsolvable configuration of size {witness.pi - 1} for root {witness.root}: "
                 f"{list(witness.configuration.counts)}")
    logging.info(f"{witness.explored_states:,} states expanded in {elapsed:.1f}s")


def twopeb(args):
    """
    2-pebbling and monotone 2-pebbling tables of one graph.
    """
    from pathlib import Path
    from pebblebound.graphs import resolve_graph
    from pebblebound.oracle import two_pebbling_tables
    from pebblebound.profiles import save_profiles

    g = resolve_graph(args.graph)
    logging.info(f"[bold cyan]TWOPEB Mode[/bold cyan] - [white]{g.name}[/white]\n" + "=" * 50)
    start = time.perf_counter()
    profile = two_pebbling_tables(g, workers=args.jobs)
    elapsed = time.perf_counter() - start

    width = max(3, len(str(max(profile.two_peb.values()))))
    logging.info(f"pi({g.name}) = {profile.pi}")
    logging.info("s          " + " ".join(f"{s:>{width}}" for s in profile.two_peb))
    logging.info("pi2        " + " ".join(f"{v:>{width}}" for v in profile.two_peb.values()))
    logging.info("pi2 (mon)  " + " ".join(f"{v:>{width}}" for v in profile.two_peb_mon.values()))
    logging.info(f"U = {profile.u_set}   U_mon = {profile.u_mon_set}")
    logging.info(f"difference = {profile.difference}   monotone difference = {profile.difference_mon}")
    if profile.has_two_pebbling_property:
        logging.info(f"[green]✓[/green] {g.name} has the 2-pebbling property")
    else:
        logging.info(f"[yellow]✗[/yellow] {g.name} lacks the 2-pebbling property")
    logging.info(f"Computed in {elapsed:.1f}s")
    if args.save:
        save_profiles([profile], Path(args.save))
        logging.info(f"Profile saved: {args.save}")


def bound(args):
    """
    Upper bound on pi(G □ H) over every root.
    """
    from pathlib import Path
    from pebblebound.constants import GAPPED_TIME_LIMIT, REPORTS_FOLDER_NAME
    from pebblebound.graphs import resolve_graph
    from pebblebound.model import ProductInstance, load_policy
    from pebblebound.reference import reference_record
    from pebblebound.report import (
        ResultsCache, compare_bound, create_dataframe, generate_html_report, safe_stem, save_report_data,
    )

    g, h = resolve_graph(args.g), resolve_graph(args.h)
    logging.info(f"[bold cyan]BOUND Mode[/bold cyan] - [white]{g.name} x {h.name}[/white]\n" + "=" * 50)
    overrides = _load_overrides(args)
    policy = load_policy(Path(args.policy_file) if args.policy_file else None)
    inst = ProductInstance(g, h, _profile_for(g, overrides, args), _profile_for(h, overrides, args))
    cache = None if args.no_cache else ResultsCache(args.workdir)
    report = _bound_instance(inst, policy, args, cache, args.time_budget or GAPPED_TIME_LIMIT, args.jobs)

    logging.info(f"\n{'='*70}\nFINAL SUMMARY\n{'='*70}")
    logging.info(f"pi({g.name} x {h.name}) <= [bold]{report.final_bound}[/bold]")
    logging.info(f"Graham value pi(G)pi(H) = {report.graham_value}: {report.graham_status}")
    tight = " (tight)" if report.tight else ""
    logging.info(f"Lower bound max(|V|, 2^diam) = {report.lower_bound}{tight}")
    logging.info(f"{len(report.candidate_roots)} candidate roots, {report.orbit_pruned} pruned by symmetry, "
                 f"{len(report.solves)} solves in {report.seconds:.1f}s")

    record = reference_record(args.g, args.h)
    rows = [{
        'table': record.table if record else None,
        'instance': f"{g.name} x {h.name}",
        'published': record.bound if record else None,
        'computed': report.final_bound,
        'graham': report.graham_value,
        'status': compare_bound(record.bound, report.final_bound) if record else '',
        'seconds': round(report.seconds, 1),
        'published_seconds': record.seconds if record else None,
        'note': '',
    }]
    if record:
        logging.info(f"Reference bound: {record.bound} (table {record.table}) -> {rows[0]['status']}")
    logging.info(f"{'='*70}")

    output = Path(args.output) if args.output else args.workdir / REPORTS_FOLDER_NAME / f"bound_{safe_stem(g.name, h.name)}.json"
    save_report_data(rows, output, f"{g.name} x {h.name}", reports=[report])
    if args.html:
        generate_html_report(create_dataframe(rows), output.with_suffix('.html'), f"{g.name} x {h.name}")


def _reproduce_lemke_rows(args):
    from pebblebound.graphs import catalog_graph
    from pebblebound.oracle import two_pebbling_tables
    from pebblebound.reference import LEMKE_TWO_PEB, LEMKE_TWO_PEB_MON
    from pebblebound.report import DISAGREE, MATCH

    rows = []
    for name in ("lemke", "lemke1", "lemke2"):
        start = time.perf_counter()
        profile = two_pebbling_tables(catalog_graph(name), workers=args.jobs)
        elapsed = round(time.perf_counter() - start, 1)
        for label, printed, computed in (("pi2", LEMKE_TWO_PEB, profile.two_peb),
                                         ("pi2 mon", LEMKE_TWO_PEB_MON, profile.two_peb_mon)):
            for s, value in printed.items():
                rows.append({
                    'table': 1, 'instance': f"{name} {label} s={s}", 'published': value,
                    'computed': computed[s], 'graham': None,
                    'status': MATCH if computed[s] == value else DISAGREE,
                    'seconds': elapsed, 'published_seconds': None, 'note': '',
                })
    return rows


def _reproduce_base_rows(args):
    from pebblebound.constants import REPRODUCE_ORACLE_PI_CAP
    from pebblebound.errors import OracleBudgetError
    from pebblebound.graphs import catalog_graph
    from pebblebound.oracle import pebbling_number
    from pebblebound.reference import BASE_GRAPHS
    from pebblebound.report import DISAGREE, MATCH, SKIPPED

    rows = []
    for entry in BASE_GRAPHS.values():
        row = {'table': 2, 'instance': entry.display, 'published': entry.printed_pi, 'computed': None,
               'graham': None, 'status': SKIPPED, 'seconds': None, 'published_seconds': None, 'note': ''}
        if entry.pi > REPRODUCE_ORACLE_PI_CAP:
            row['note'] = f"pi {entry.pi} above the oracle reproduction cap"
            rows.append(row)
            continue
        start = time.perf_counter()
        try:
            computed = pebbling_number(catalog_graph(entry.catalog_id), workers=args.jobs)
        except OracleBudgetError as exc:
            row['note'] = str(exc)
            rows.append(row)
            continue
        row.update(computed=computed, seconds=round(time.perf_counter() - start, 1),
                   status=MATCH if computed == entry.printed_pi else DISAGREE)
        if entry.printed_pi != entry.pi:
            row['note'] = f"products in the tables use {entry.pi}"
        rows.append(row)
    return rows


def _reproduce_product_row(record, args, overrides, policy, cache):
    from pebblebound.constants import GAPPED_TIME_LIMIT
    from pebblebound.errors import PebbleboundError
    from pebblebound.graphs import catalog_graph
    from pebblebound.model import ProductInstance
    from pebblebound.report import FAILED, SKIPPED, compare_bound

    row = {'table': record.table, 'instance': record.label, 'published': record.bound, 'computed': None,
           'graham': record.graham, 'status': SKIPPED, 'seconds': None, 'published_seconds': record.seconds,
           'note': record.note}
    if record.bound is None:
        return row, None
    if args.time_budget is not None and record.seconds > args.time_budget:
        row['note'] = f"published time {record.seconds}s exceeds the budget"
        return row, None
    try:
        g, h = catalog_graph(record.g_id), catalog_graph(record.h_id)
        inst = ProductInstance(g, h, overrides[g.name], overrides[h.name])
        report = _bound_instance(inst, policy, args, cache, args.time_budget or GAPPED_TIME_LIMIT, 1)
    except PebbleboundError as exc:
        logging.error(f"[red]✗[/red] {record.label}: {exc}")
        row.update(status=FAILED, note=str(exc))
        return row, None
    row.update(computed=report.final_bound, status=compare_bound(record.bound, report.final_bound),
               seconds=round(report.seconds, 1))
    if report.graham_value != record.graham:
        row['note'] = f"profiles give Graham value {report.graham_value}"
    return row, report


def reproduce(args):
    """
    Recompute one reference table and compare it row by row.
    """
    from pathlib import Path
    from pebblebound.constants import REPORTS_FOLDER_NAME
    from pebblebound.core import run_parallel
    from pebblebound.model import load_policy
    from pebblebound.reference import BASE_GRAPHS, TABLES, published_profiles
    from pebblebound.report import (
        ResultsCache, create_dataframe, generate_html_report, save_report_data, status_counts,
    )

    table = args.table
    logging.info(f"[bold cyan]REPRODUCE Mode[/bold cyan] - [white]Table {table}[/white]\n" + "=" * 50)
    notes = []
    reports = []
    if table == 1:
        rows = _reproduce_lemke_rows(args)
    elif table == 2:
        rows = _reproduce_base_rows(args)
    else:
        overrides = published_profiles()
        overrides.update(_load_overrides(args))
        for entry in BASE_GRAPHS.values():
            if entry.printed_pi != entry.pi:
                notes.append(f"{entry.display}: printed pi {entry.printed_pi}, model uses "
                             f"{overrides[entry.catalog_id].pi}")
        policy = load_policy(Path(args.policy_file) if args.policy_file else None)
        records = TABLES[table]
        if args.only:
            wanted = {item.strip() for item in args.only.split(",")}
            records = [r for r in records if f"{r.g}*{r.h}" in wanted]
        cache = None if args.no_cache else ResultsCache(args.workdir)
        results = run_parallel(records, _reproduce_product_row, args.jobs, f"Table {table}",
                               worker_args=(args, overrides, policy, cache), threads=True)
        rows = [row for row, _ in results]
        reports = [report for _, report in results if report is not None]

    df = create_dataframe(rows)
    counts = status_counts(df)
    logging.info(f"\n{'='*70}\nFINAL SUMMARY\n{'='*70}")
    for row in rows:
        computed = row['computed'] if row['computed'] is not None else '-'
        logging.info(f"{row['instance']:<28} published {str(row['published']):>8}  computed {str(computed):>8}  {row['status']}")
    logging.info(f"{'-'*70}")
    logging.info("  ".join(f"{status}: {count}" for status, count in counts.items()) or "no rows")
    for note in notes:
        logging.info(f"[dim]{note}[/dim]")
    logging.info(f"{'='*70}")

    output = Path(args.output) if args.output else args.workdir / REPORTS_FOLDER_NAME / f"table{table}.json"
    save_report_data(rows, output, f"Table {table}", notes, reports)
    generate_html_report(df, output.with_suffix('.html'), f"Table {table}", notes)


def emit_lp(args):
    """
    Write the LP file of one product instance and root.
    """
    from pathlib import Path
    from pebblebound.graphs import resolve_graph
    from pebblebound.lpformat import write_listing, write_lp
    from pebblebound.model import ProductInstance, assemble_model, load_policy

    g, h = resolve_graph(args.g), resolve_graph(args.h)
    overrides = _load_overrides(args)
    policy = load_policy(Path(args.policy_file) if args.policy_file else None)
    inst = ProductInstance(g, h, _profile_for(g, overrides, args), _profile_for(h, overrides, args), args.root)
    model = assemble_model(inst, policy)
    output = write_lp(model, Path(args.output))
    logging.info(f"[green]✓[/green] {output}: {len(model.catalog)} variables, {model.constraint_count} constraints")
    if args.listing:
        listing = write_listing(model, output.with_suffix('.listing.txt'))
        logging.info(f"[green]✓[/green] Listing: {listing}")


def probe_solvers(args):
    """
    List the MILP solvers found on PATH, in preference order.
    """
    import shutil
    from pebblebound.solvers import BACKENDS, probe_backends

    found = probe_backends()
    if not found:
        logging.warning("No supported solver found (highs, cbc, scip, gurobi_cl).")
        return
    for index, sid in enumerate(found):
        marker = "[bold green]default[/bold green]" if index == 0 else ""
        logging.info(f"{sid:<8} {shutil.which(BACKENDS[sid].executable)} {marker}")


def report(args):
    """
    Regenerate an HTML report from a previously saved JSON data file.
    """
    from pathlib import Path
    from pebblebound.report import load_report_data, create_dataframe, generate_html_report

    json_path = Path(args.json_file)
    if not json_path.exists():
        logging.error(f"File not found: {json_path}")
        return 2

    rows, title, notes, _ = load_report_data(json_path)
    output_html = args.output or str(json_path.with_suffix('.html'))
    logging.info("Generating HTML report...")
    generate_html_report(create_dataframe(rows), Path(output_html), title, notes)


def _root_pair(text: str):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"root must look like 'i,j', got {text!r}")
    return (i, j)


def build_parser() -> argparse.ArgumentParser:
    from pathlib import Path
    from pebblebound.constants import DEFAULT_WORKDIR

    parser = argparse.ArgumentParser(
        prog='pebblebound',
        description='pebblebound - pebbling oracles and IP upper bounds for Cartesian product graphs.'
    )

    # Global options
    parser.add_argument('-v', '--verbose', action='store_true', help='Enable verbose (debug) output.')
    parser.add_argument('-q', '--quiet', action='store_true', help='Suppress all output except errors.')
    parser.add_argument('--solver', default=None, help='MILP backend: highs, cbc, scip or gurobi (default: $PEBBLEBOUND_SOLVER, then the first one installed).')
    parser.add_argument('--workdir', type=Path, default=Path(DEFAULT_WORKDIR), help='Folder for solver files, cache and reports.')
    parser.add_argument('--jobs', type=int, default=1, help='Parallel workers (roots, oracle orbits, reproduction rows).')
    parser.add_argument('--policy-file', default=None, help='JSON file overriding the constraint enumeration caps.')
    parser.add_argument('--profile-override', default=None, help="Profile file, or 'published' for the profiles behind the reference tables.")
    parser.add_argument('--time-budget', type=float, default=None, help='Seconds per instance: time limit of gapped solves; reproduce skips rows whose reference time exceeds it.')
    parser.add_argument('--gap-schedule', default=None, help='Comma-separated decreasing relative gaps (default 0.1,0.05,0).')

    # Subcommands
    subparsers = parser.add_subparsers(dest='command', required=True, help='Available commands')

    pi_parser = subparsers.add_parser('pi', help='Pebbling number of a graph by exhaustive search.')
    pi_parser.add_argument('graph', help='Catalog name (lemke, cycle:7, complete-bipartite:4,4, ...) or graph file.')

    twopeb_parser = subparsers.add_parser('twopeb', help='2-pebbling and monotone 2-pebbling tables of a graph.')
    twopeb_parser.add_argument('graph', help='Catalog name or graph file.')
    twopeb_parser.add_argument('--save', default=None, help='Write the profile to this file for --profile-override.')

    bound_parser = subparsers.add_parser('bound', help='Upper bound on pi(G x H) over all roots.')
    bound_parser.add_argument('g', help='First factor.')
    bound_parser.add_argument('h', help='Second factor.')
    bound_parser.add_argument('-o', '--output', default=None, help='Path of the JSON report (default: <workdir>/reports/).')
    bound_parser.add_argument('--html', action='store_true', help='Also write an HTML report next to the JSON.')
    bound_parser.add_argument('--no-cache', action='store_true', help='Ignore and do not update the results cache.')

    reproduce_parser = subparsers.add_parser('reproduce', help='Recompute a reference table (1-8) and compare.')
    reproduce_parser.add_argument('table', type=int, choices=range(1, 9), help='Table number.')
    reproduce_parser.add_argument('--only', default=None, help='Comma-separated rows to run, e.g. L*K8,K44*K44.')
    reproduce_parser.add_argument('-o', '--output', default=None, help='Path of the JSON report (HTML is written next to it).')
    reproduce_parser.add_argument('--no-cache', action='store_true', help='Ignore and do not update the results cache.')

    emit_parser = subparsers.add_parser('emit-lp', help='Write the LP file of one instance and root.')
    emit_parser.add_argument('g', help='First factor.')
    emit_parser.add_argument('h', help='Second factor.')
    emit_parser.add_argument('-o', '--output', required=True, help='Destination .lp file.')
    emit_parser.add_argument('--root', type=_root_pair, default=(1, 1), help="Root as 'i,j' (default 1,1).")
    emit_parser.add_argument('--listing', action='store_true', help='Also write a constraint listing next to the LP file.')

    subparsers.add_parser('probe-solvers', help='List installed MILP solvers.')

    report_parser = subparsers.add_parser('report', help='Regenerate an HTML report from a saved JSON report.')
    report_parser.add_argument('json_file', help='Path to a .json report written by bound or reproduce.')
    report_parser.add_argument('-o', '--output', type=str, default=None, help='Path to the output HTML report (default: same name as JSON with .html extension).')
    return parser


_COMMANDS = {
    'pi': pi,
    'twopeb': twopeb,
    'bound': bound,
    'reproduce': reproduce,
    'emit-lp': emit_lp,
    'probe-solvers': probe_solvers,
    'report': report,
}


def run(argv=None) -> int:
    """Parse, dispatch and map errors to exit codes."""
    from pebblebound.core import setup_logging
    from pebblebound.errors import BackendError, OracleBudgetError, PebbleboundError

    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    if args.jobs is not None and args.jobs < 1:
        logging.error("--jobs must be at least 1")
        return 2
    try:
        return _COMMANDS[args.command](args) or 0
    except OracleBudgetError as exc:
        logging.error(f"[red]✗[/red] {exc}")
        logging.error("The exhaustive search is meant for small graphs; pass --profile-override with known values.")
        return exc.exit_code
    except BackendError as exc:
        logging.error(f"[red]✗[/red] {exc}")
        if exc.diagnostics:
            logging.debug(exc.diagnostics)
        return exc.exit_code
    except PebbleboundError as exc:
        logging.error(f"[red]✗[/red] {exc}")
        return exc.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
