"""
pebblebound/core.py
Logging, progress display and the worker pool shared by the oracle, the
root search and the reproduction harness.
"""

import os
import logging
import platform
from typing import Any, Callable, Iterable, List
from contextlib import contextmanager
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from rich.logging import RichHandler
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, TaskProgressColumn, TimeRemainingColumn, MofNCompleteColumn
from rich.console import Console


def setup_logging(verbose: bool = False, quiet: bool = False):
    """Configure logging for the application."""
    log_level = logging.INFO
    if verbose:
        log_level = logging.DEBUG
    if quiet:
        log_level = logging.ERROR

    log_format = '%(message)s' if log_level > logging.DEBUG else '%(levelname)s: %(message)s'

    # Force reconfiguration of the root logger to ensure our settings are applied
    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)

    rich_handler = RichHandler(
        level=log_level,
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=True,
        rich_tracebacks=True
    )
    rich_handler.setFormatter(logging.Formatter(log_format))
    root.addHandler(rich_handler)
    root.setLevel(log_level)


def _cap_workers(workers: int | None) -> int | None:
    """Cap workers to 61 on Windows (ProcessPoolExecutor limitation)."""
    if platform.system() == 'Windows' and workers is not None and workers > 61:
        logging.warning(f"Requested {workers} workers exceeds Windows limit. Capping at 61.")
        return 61
    return workers


@contextmanager
def search_progress(description: str):
    """Reusable Rich progress bar context manager."""
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(bar_width=None),
        MofNCompleteColumn(),
        TaskProgressColumn(),
        TimeRemainingColumn(),
        console=Console(stderr=True),
        transient=True,
        expand=True
    ) as progress:
        yield progress, description


def run_parallel(
    items: Iterable[Any],
    worker_fn: Callable[..., Any],
    workers: int | None,
    description: str,
    worker_args: tuple = (),
    threads: bool = False,
) -> List[Any]:
    """Run worker_fn over items with a unified progress bar.

    Parameters
    ----------
    items : work items, each passed as the first argument
    worker_fn : callable(item, *worker_args) -> result
    workers : number of workers (None = cpu_count, 1 = sequential)
    description : progress bar label
    worker_args : extra positional args passed after the item
    threads : use a thread pool (subprocess-bound work) instead of processes

    Results are returned in the order of ``items`` whatever the completion order.
    """
    items = list(items)
    workers = _cap_workers(workers)
    results: List[Any] = [None] * len(items)

    with search_progress(description) as (progress, _desc):
        task = progress.add_task(description, total=len(items))
        if (workers is not None and workers == 1) or len(items) <= 1:
            logging.debug("Running in [bold]sequential[/bold] mode (1 worker).")
            for index, item in enumerate(items):
                results[index] = worker_fn(item, *worker_args)
                progress.advance(task)
        else:
            effective_workers = workers if workers else os.cpu_count()
            logging.debug(f"Running in [bold]parallel[/bold] mode ({effective_workers} workers).")
            pool = ThreadPoolExecutor if threads else ProcessPoolExecutor
            with pool(max_workers=workers) as executor:
                futures = {executor.submit(worker_fn, item, *worker_args): index for index, item in enumerate(items)}
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
                    progress.advance(task)

    return results
