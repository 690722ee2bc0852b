# helpers/sweep_helpers.py

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, NamedTuple, Optional

from tqdm import tqdm

from helpers.bounds import evaluate_bound, evaluate_ekr
from helpers.errors import ParameterError, UnsupportedSchemeError
from helpers.schemes import FAMILIES_WITH_M, M_ONLY_FAMILIES, make_scheme
from models import BoundReport, SchemeFamily
from schemas import RunConfig


class SweepTask(NamedTuple):
    family: str
    q: int
    n: Optional[int]
    m: Optional[int]
    d: Optional[int]
    t: Optional[int]


def build_tasks(config: RunConfig, ekr: bool = False) -> list[SweepTask]:
    """Parameter tuples in output order: family, q, n, m, then d (or t)."""
    values = config.t_values if ekr else config.d_values
    if not values:
        raise ParameterError("table needs --t with --ekr" if ekr else "table needs --d")
    tasks = []
    for family in config.schemes:
        if family in FAMILIES_WITH_M and not config.m_values:
            raise ParameterError(f"{family.value} needs --m")
        if family not in M_ONLY_FAMILIES and not config.n_values:
            raise ParameterError(f"{family.value} needs --n")
        # Johnson does not depend on q.
        q_values = config.q_values[:1] if family == SchemeFamily.JOHNSON else config.q_values
        n_values = [None] if family in M_ONLY_FAMILIES else config.n_values
        m_values = config.m_values if family in FAMILIES_WITH_M else [None]
        for q in q_values:
            for n in n_values:
                for m in m_values:
                    if n is not None and m is not None and m < n:
                        continue
                    classes = m // 2 if n is None else n
                    for value in values:
                        if value > classes and not (ekr and family in M_ONLY_FAMILIES):
                            continue
                        tasks.append(SweepTask(family.value, q, n, m, None if ekr else value, value if ekr else None))
    logging.info(f"Sweep has {len(tasks)} parameter tuples")
    return tasks


def evaluate_task(task: SweepTask) -> Optional[BoundReport]:
    """One table row, or None when the tuple is outside the family's admissible range."""
    try:
        spec = make_scheme(task.family, task.q, n=task.n, m=task.m)
        if task.t is not None:
            return evaluate_ekr(spec, task.t)
        return evaluate_bound(spec, task.d)
    except (ParameterError, UnsupportedSchemeError) as e:
        logging.info(f"Skipping {task}: {str(e)}")
        return None


def run_sweep(tasks: list[SweepTask], workers: int = 1) -> Iterator[BoundReport]:
    """Evaluate tasks on a bounded process pool, yielding rows in task order."""
    with tqdm(total=len(tasks), desc="table", file=sys.stderr, disable=None) as progress:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                # map() hands results back in submission order
                for report in pool.map(evaluate_task, tasks, chunksize=1):
                    progress.update(1)
                    if report is not None:
                        yield report
        else:
            for task in tasks:
                report = evaluate_task(task)
                progress.update(1)
                if report is not None:
                    yield report
