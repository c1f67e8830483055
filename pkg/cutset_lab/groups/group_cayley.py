from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple
import random
import string

from ..core.graph_core import GraphProvider, GraphWindow
from ..errors import ConfigError

GroupElement = Any


class LampState(NamedTuple):
    position: int
    lamps: Tuple[int, ...]


class Group:
    """
    A finitely generated group solved by normal forms. Elements are hashable,
    totally ordered tuples so that they double as vertex keys.
    """
    name: str = 'group'
    finitely_presented: bool = True

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        raise NotImplementedError

    def inverse(self, g: GroupElement) -> GroupElement:
        raise NotImplementedError

    def primitive(self, token: str) -> GroupElement:
        raise NotImplementedError

    def format_element(self, g: GroupElement) -> str:
        return ','.join(str(x) for x in g)

    def random_element(self, rng: random.Random, size: int = 4) -> GroupElement:
        raise NotImplementedError

    def parse_word(self, word: str) -> GroupElement:
        """Product of the family primitives spelled by `word`, e.g. 'xxY' or 'tlT'."""
        g = self.identity()
        for token in word:
            if token.isspace():
                continue
            g = self.multiply(g, self.primitive(token))
        return g

    def describe(self) -> Dict[str, Any]:
        return { 'group': self.name }


class IntegerLattice(Group):
    """Z^d with componentwise addition; primitives x, y, z, w and their capitals as inverses."""
    finitely_presented = True
    letters = 'xyzw'

    def __init__(self, rank: int = 2) -> None:
        if not 1 <= rank <= len(self.letters):
            raise ValueError(f'lattice rank must be in 1..{len(self.letters)}, got {rank}')
        self.rank = rank
        self.name = f'Z^{rank}'

    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.rank

    def multiply(self, g: Tuple[int, ...], h: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-a for a in g)

    def primitive(self, token: str) -> Tuple[int, ...]:
        i = self.letters.find(token.lower())
        if i < 0 or i >= self.rank:
            raise ConfigError(f'unknown primitive {token!r} for {self.name}')
        sign = -1 if token.isupper() else 1
        return tuple(sign if j == i else 0 for j in range(self.rank))

    def random_element(self, rng: random.Random, size: int = 4) -> Tuple[int, ...]:
        return tuple(rng.randint(-size, size) for _ in range(self.rank))

    def describe(self) -> Dict[str, Any]:
        return { 'group': 'lattice', 'rank': self.rank }


class FreeGroup(Group):
    """
    F_k by freely reduced words. A word is a tuple of nonzero integers, +i for
    the i-th generator and -i for its inverse (1-based); primitives are
    a, b, c, ... with capitals as inverses.
    """
    finitely_presented = True

    def __init__(self, rank: int = 2) -> None:
        if not 1 <= rank <= 26:
            raise ValueError(f'free group rank must be in 1..26, got {rank}')
        self.rank = rank
        self.name = f'F_{rank}'

    def identity(self) -> Tuple[int, ...]:
        return ()

    def multiply(self, g: Tuple[int, ...], h: Tuple[int, ...]) -> Tuple[int, ...]:
        word = list(g)
        for x in h:
            if word and word[-1] == -x:
                word.pop()
            else:
                word.append(x)
        return tuple(word)

    def inverse(self, g: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-x for x in reversed(g))

    def primitive(self, token: str) -> Tuple[int, ...]:
        i = string.ascii_lowercase.find(token.lower())
        if i < 0 or i >= self.rank:
            raise ConfigError(f'unknown primitive {token!r} for {self.name}')
        return (-(i + 1),) if token.isupper() else (i + 1,)

    def format_element(self, g: Tuple[int, ...]) -> str:
        if not g:
            return 'e'
        return ''.join(
                string.ascii_uppercase[-x - 1] if x < 0 else string.ascii_lowercase[x - 1]
                for x in g
        )

    def random_element(self, rng: random.Random, size: int = 4) -> Tuple[int, ...]:
        g = self.identity()
        for _ in range(rng.randint(0, size)):
            x = rng.randint(1, self.rank) * rng.choice([-1, 1])
            g = self.multiply(g, (x,))
        return g

    def describe(self) -> Dict[str, Any]:
        return { 'group': 'free', 'rank': self.rank }


class Lamplighter(Group):
    """
    Z_2 wr Z as (position, lit lamps). The product is
    (p1, L1)(p2, L2) = (p1 + p2, L1 xor (L2 + p1)): the second factor's lamps
    are read relative to the first factor's lamplighter position.
    Primitives: t = (1, {}), T = t^-1, l = L = (0, {0}).
    """
    name = 'lamplighter'
    finitely_presented = False

    def identity(self) -> LampState:
        return LampState(0, ())

    def multiply(self, g: LampState, h: LampState) -> LampState:
        lamps = set(g.lamps)
        lamps.symmetric_difference_update(x + g.position for x in h.lamps)
        return LampState(g.position + h.position, tuple(sorted(lamps)))

    def inverse(self, g: LampState) -> LampState:
        return LampState(-g.position, tuple(x - g.position for x in g.lamps))

    def primitive(self, token: str) -> LampState:
        if token == 't':
            return LampState(1, ())
        if token == 'T':
            return LampState(-1, ())
        if token in ('l', 'L'):
            return LampState(0, (0,))
        raise ConfigError(f'unknown primitive {token!r} for the lamplighter group')

    def format_element(self, g: LampState) -> str:
        return f'{g.position}|' + ','.join(str(x) for x in g.lamps)

    def random_element(self, rng: random.Random, size: int = 4) -> LampState:
        lamps = sorted(x for x in range(-size, size + 1) if rng.random() < 0.5)
        return LampState(rng.randint(-size, size), tuple(lamps))

    def describe(self) -> Dict[str, Any]:
        return { 'group': 'lamplighter' }


class GeneratingSet:
    """
    Ordered, inverse-closed generating set. The order is the one used for
    shortlex words and for neighbor order in the Cayley provider.
    """
    def __init__(self,
            group: Group,
            elements: Sequence[GroupElement],
            names: Optional[Sequence[str]] = None
    ) -> None:
        elements = tuple(elements)
        if names is None:
            names = [group.format_element(g) for g in elements]
        names = tuple(names)
        if len(names) != len(elements):
            raise ValueError('one name per generator is required')
        if len(set(names)) != len(names):
            raise ValueError(f'duplicate generator names: {names}')
        if len(set(elements)) != len(elements):
            raise ValueError('generating set contains repeated elements')
        identity = group.identity()
        if identity in elements:
            raise ValueError('the identity cannot be a generator')
        index = { g: i for i, g in enumerate(elements) }
        for g, name in zip(elements, names):
            if group.inverse(g) not in index:
                raise ValueError(f'generating set is not closed under inverses: {name}^-1 missing')
        self.group = group
        self.elements: Tuple[GroupElement, ...] = elements
        self.names: Tuple[str, ...] = names
        self._index = index
        self._name_index = { name: i for i, name in enumerate(names) }

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, name: str) -> int:
        if name not in self._name_index:
            raise ConfigError(f'unknown generator name {name!r}; known: {list(self.names)}')
        return self._name_index[name]

    def inverse_index(self, i: int) -> int:
        return self._index[self.group.inverse(self.elements[i])]

    def parse(self, word: Any) -> List[int]:
        """Generator names, given as a list or a comma separated string, to indices."""
        if isinstance(word, str):
            word = [w.strip() for w in word.split(',') if w.strip()]
        return [self.index_of(name) for name in word]

    def describe(self) -> Dict[str, Any]:
        return { 'generators': list(self.names) }


def generating_set_from_words(group: Group, words: Sequence[str]) -> GeneratingSet:
    return GeneratingSet(group, [group.parse_word(w) for w in words], names = list(words))


def preset_generators(group: Group, preset: str = 'standard') -> GeneratingSet:
    if isinstance(group, IntegerLattice):
        if group.rank == 1 and preset == 'standard':
            return GeneratingSet(group, [(1,), (-1,)], names = ['+', '-'])
        if group.rank == 2 and preset == 'standard':
            return GeneratingSet(group, [(1, 0), (0, 1), (-1, 0), (0, -1)], names = ['E', 'N', 'W', 'S'])
        if group.rank == 2 and preset == 'king':
            return GeneratingSet(
                    group,
                    [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)],
                    names = ['E', 'N', 'W', 'S', 'NE', 'NW', 'SW', 'SE']
            )
        if preset == 'standard':
            words = list(group.letters[:group.rank]) + [c.upper() for c in group.letters[:group.rank]]
            return generating_set_from_words(group, words)
    if isinstance(group, FreeGroup) and preset == 'standard':
        lower = list(string.ascii_lowercase[:group.rank])
        return generating_set_from_words(group, lower + [c.upper() for c in lower])
    if isinstance(group, Lamplighter):
        if preset == 'standard':
            return GeneratingSet(group, [LampState(1, ()), LampState(-1, ()), LampState(0, (0,))], names = ['t', 'T', 'l'])
        if preset == 'dl':
            # s = l t moves right and toggles the lamp that was left behind
            return GeneratingSet(
                    group,
                    [LampState(1, ()), LampState(1, (0,)), LampState(-1, ()), LampState(-1, (-1,))],
                    names = ['t', 's', 'T', 'S']
            )
    raise ConfigError(f'no generating set preset {preset!r} for {group.name}')


class CayleyProvider(GraphProvider):
    def __init__(self, group: Group, gens: GeneratingSet) -> None:
        if gens.group is not group:
            raise ValueError('generating set belongs to a different group')
        self.group = group
        self.gens = gens
        self.origin = group.identity()
        self.degree_bound = len(gens)
        self.family = f'cayley:{group.name}'

    def neighbors(self, v: GroupElement) -> List[GroupElement]:
        result = []
        for s in self.gens.elements:
            u = self.group.multiply(v, s)
            if u not in result:
                result.append(u)
        return result

    def format_key(self, v: GroupElement) -> str:
        return self.group.format_element(v)

    def describe(self) -> Dict[str, Any]:
        return { 'family': self.family, 'degree_bound': self.degree_bound, **self.group.describe(), **self.gens.describe() }


def cayley_provider(group: Group, gens: GeneratingSet) -> CayleyProvider:
    return CayleyProvider(group, gens)


def word_to_element(group: Group, gens: GeneratingSet, word: Sequence[int]) -> GroupElement:
    g = group.identity()
    for i in word:
        if not 0 <= i < len(gens):
            raise ValueError(f'generator index {i} out of range for {len(gens)} generators')
        g = group.multiply(g, gens.elements[i])
    return g


def translation_is_automorphism(w: GraphWindow, g: GroupElement) -> bool:
    """
    Left translation v -> g v maps B_R(o) intersected with g^-1 B_R(o) into the
    window, injectively, preserving adjacency and window degrees of interior
    vertices.
    """
    provider = w.provider
    assert isinstance(provider, CayleyProvider), 'translation check needs a Cayley window'
    group = provider.group
    domain = [v for v in w.vertices if group.multiply(g, v) in w]
    images = [group.multiply(g, v) for v in domain]
    if len(set(images)) != len(images):
        return False
    domain_set = set(domain)
    for v, gv in zip(domain, images):
        for u in provider.neighbors(v):
            if u in domain_set and group.multiply(g, u) not in provider.neighbors(gv):
                return False
        interior = w.depth[v] < w.radius and w.depth[gv] < w.radius
        if interior and len(w.adjacency[v]) != len(w.adjacency[gv]):
            return False
    return True
