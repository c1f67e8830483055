from typing import Any, Iterable, Optional, TypeVar
import os

from tqdm.auto import tqdm

T = TypeVar('T')

MAX_VERTICES_ENV = 'CUTSET_LAB_MAX_VERTICES'
DEFAULT_MAX_VERTICES = 10 ** 6


def log(message: Any, verbose: bool = True) -> None:
    if verbose:
        tqdm.write(str(message))


def progress(
        iterable: Optional[Iterable[T]],
        desc: str,
        verbose: bool = False,
        total: Optional[int] = None
) -> Iterable[T]:
    return tqdm(
            iterable,
            desc = desc,
            total = total,
            dynamic_ncols = True,
            smoothing = 0.1,
            leave = False,
            disable = not verbose
    )


def resolve_max_vertices(max_vertices: Optional[int] = None) -> int:
    # explicit argument wins, then the environment, then the default
    if max_vertices is not None:
        return int(max_vertices)
    env = os.environ.get(MAX_VERTICES_ENV)
    if env:
        return int(env)
    return DEFAULT_MAX_VERTICES
