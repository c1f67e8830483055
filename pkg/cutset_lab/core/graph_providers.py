from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import ConfigError
from .graph_core import GraphProvider


class HexLatticeProvider(GraphProvider):
    """
    Hexagonal lattice in brick-wall coordinates: (x, y) is joined to (x +- 1, y)
    and vertically to (x, y + 1) when x + y is even, to (x, y - 1) otherwise.
    """
    family = 'hex'
    degree_bound = 3

    def __init__(self) -> None:
        self.origin = (0, 0)

    def neighbors(self, v: Tuple[int, int]) -> List[Tuple[int, int]]:
        x, y = v
        vertical = (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)
        return [(x + 1, y), vertical, (x - 1, y)]


class RegularTreeProvider(GraphProvider):
    """d-regular tree; a vertex is the tuple of child indices on the path from the root."""
    family = 'tree'

    def __init__(self, degree: int = 3) -> None:
        if degree < 2:
            raise ValueError(f'tree degree must be at least 2, got {degree}')
        self.degree = degree
        self.degree_bound = degree
        self.origin = ()

    def neighbors(self, v: Tuple[int, ...]) -> List[Tuple[int, ...]]:
        if not v:
            return [(i,) for i in range(self.degree)]
        return [v[:-1]] + [v + (i,) for i in range(self.degree - 1)]

    def format_key(self, v: Tuple[int, ...]) -> str:
        return '.'.join(str(i) for i in v) if v else 'root'

    def describe(self) -> Dict[str, Any]:
        return { 'family': self.family, 'degree': self.degree, 'degree_bound': self.degree_bound }


def _lattice(rank: int = 2, generators: Optional[Sequence[str]] = None) -> GraphProvider:
    from ..groups.group_cayley import IntegerLattice, cayley_provider, generating_set_from_words, preset_generators
    group = IntegerLattice(rank)
    gens = generating_set_from_words(group, generators) if generators else preset_generators(group)
    return cayley_provider(group, gens)


def _king() -> GraphProvider:
    from ..groups.group_cayley import IntegerLattice, cayley_provider, preset_generators
    group = IntegerLattice(2)
    return cayley_provider(group, preset_generators(group, 'king'))


def _free(rank: int = 2, generators: Optional[Sequence[str]] = None) -> GraphProvider:
    from ..groups.group_cayley import FreeGroup, cayley_provider, generating_set_from_words, preset_generators
    group = FreeGroup(rank)
    gens = generating_set_from_words(group, generators) if generators else preset_generators(group)
    return cayley_provider(group, gens)


def _lamplighter(generators: Any = 'standard') -> GraphProvider:
    from ..groups.group_cayley import Lamplighter, cayley_provider, generating_set_from_words, preset_generators
    group = Lamplighter()
    if isinstance(generators, str):
        gens = preset_generators(group, generators)
    else:
        gens = generating_set_from_words(group, generators)
    return cayley_provider(group, gens)


def _dl(k: int = 2, n: int = 2) -> GraphProvider:
    from ..groups.group_dl import dl_provider
    return dl_provider(k, n)


PROVIDER_FAMILIES: Dict[str, Tuple[Callable[..., GraphProvider], str]] = {
        'lattice': (_lattice, 'Z^rank, unit vectors (rank, generators: words over x y z w)'),
        'king': (_king, 'Z^2 with the 8 king moves'),
        'hex': (HexLatticeProvider, 'hexagonal lattice, brick-wall coordinates'),
        'tree': (RegularTreeProvider, 'd-regular tree (degree)'),
        'free': (_free, 'free group F_rank, free generators (rank, generators)'),
        'lamplighter': (_lamplighter, 'Z_2 wr Z (generators: standard | dl | list of words over t T l)'),
        'dl': (_dl, 'Diestel-Leader graph DL(k, n)')
}


def make_provider(family: str, **params: Any) -> GraphProvider:
    if family not in PROVIDER_FAMILIES:
        raise ConfigError(f'unknown provider family {family!r}; known: {sorted(PROVIDER_FAMILIES)}')
    factory, _ = PROVIDER_FAMILIES[family]
    try:
        return factory(**params)
    except TypeError as e:
        raise ConfigError(f'bad parameters for provider family {family!r}: {e}') from e
    except ValueError as e:
        raise ConfigError(f'provider family {family!r}: {e}') from e


def list_providers() -> List[Tuple[str, str]]:
    return [(name, doc) for name, (_, doc) in PROVIDER_FAMILIES.items()]
