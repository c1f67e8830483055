from typing import Any, Dict, List, Literal, Optional, Type

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .core.graph_providers import PROVIDER_FAMILIES
from .cutsets.cutset_closeness import CONVENTIONS, SUBDIVISION
from .errors import ConfigError

EXPERIMENTS = (
        'enumerate',
        'closeness-sup',
        'dl-family',
        'half-t',
        'qi-transfer',
        'growth',
        'finiteness',
        'subgraph-count'
)


class _Section(BaseModel):
    model_config = ConfigDict(extra = 'forbid')


class ProviderConfig(_Section):
    family: str
    params: Dict[str, Any] = {}

    @field_validator('family')
    @classmethod
    def _known_family(cls, v: str) -> str:
        if v not in PROVIDER_FAMILIES:
            raise ValueError(f'unknown provider family {v!r}; known: {sorted(PROVIDER_FAMILIES)}')
        return v


class OutputConfig(_Section):
    dir: str = 'results'
    dot: bool = False
    dump_window: bool = False


class CapsConfig(_Section):
    max_vertices: Optional[int] = Field(default = None, ge = 1)
    max_nodes: Optional[int] = Field(default = None, ge = 1)


class _Params(_Section):
    convention: str = SUBDIVISION

    @field_validator('convention')
    @classmethod
    def _known_convention(cls, v: str) -> str:
        if v not in CONVENTIONS:
            raise ValueError(f'unknown convention {v!r}; known: {list(CONVENTIONS)}')
        return v


class EnumerateParams(_Params):
    n_max: int = Field(ge = 1)
    shards: int = Field(default = 1, ge = 1)
    with_closeness: bool = False
    verify: bool = False


class ClosenessSupParams(_Params):
    n_max: int = Field(ge = 1)
    oracle_samples: int = Field(default = 0, ge = 0)
    oracle_max_size: int = Field(default = 12, ge = 1, le = 20)


class DLFamilyParams(_Params):
    k_min: int = Field(default = 1, ge = 1)
    k_max: int = Field(ge = 1)

    @model_validator(mode = 'after')
    def _ordered(self) -> 'DLFamilyParams':
        if self.k_max < self.k_min:
            raise ValueError(f'k_max ({self.k_max}) is below k_min ({self.k_min})')
        return self


class HalfTParams(_Params):
    relators: List[str]
    n_max: int = Field(ge = 1)
    instances: int = Field(default = 0, ge = 0)
    instance_max_size: int = Field(default = 4, ge = 1)
    instance_y_depth: int = Field(default = 4, ge = 1)


class QITransferParams(_Params):
    map: str
    m: Optional[int] = Field(default = None, ge = 1)
    sample_radius: Optional[int] = Field(default = None, ge = 0)
    n_max: int = Field(default = 0, ge = 0)
    fiber_sizes: List[int] = []
    transfer_hk: List[int] = []
    transfer_boxes: List[int] = []
    closure_hk: List[int] = []
    closure_n: int = Field(default = 2, ge = 0)


class GrowthParams(_Params):
    n_max: int = Field(ge = 0)
    subperiodic: List[str] = []
    subperiodic_depth: int = Field(default = 3, ge = 0)
    fx_margin: int = Field(default = 2, ge = 0)
    dump_tree: bool = False


class FinitenessParams(_Params):
    n: int = Field(ge = 1)
    radii: List[int] = Field(min_length = 1)


class SubgraphCountParams(_Params):
    n_max: int = Field(ge = 1)
    certificate_n_max: Optional[int] = Field(default = None, ge = 0)


PARAM_MODELS: Dict[str, Type[_Params]] = {
        'enumerate': EnumerateParams,
        'closeness-sup': ClosenessSupParams,
        'dl-family': DLFamilyParams,
        'half-t': HalfTParams,
        'qi-transfer': QITransferParams,
        'growth': GrowthParams,
        'finiteness': FinitenessParams,
        'subgraph-count': SubgraphCountParams
}


class ExperimentConfig(_Section):
    """
    One experiment: the graph, the window radius, what to run and what it has
    to reproduce. `target` and `target_radius` describe the second graph of a
    quasi-isometry experiment.
    """
    experiment: Literal[EXPERIMENTS]
    provider: ProviderConfig
    radius: int = Field(ge = 1)
    target: Optional[ProviderConfig] = None
    target_radius: Optional[int] = Field(default = None, ge = 1)
    params: Dict[str, Any] = {}
    expect: Dict[str, Any] = {}
    output: OutputConfig = OutputConfig()
    caps: CapsConfig = CapsConfig()
    seed: int = 0
    verbose: bool = False

    @model_validator(mode = 'after')
    def _target_for_maps(self) -> 'ExperimentConfig':
        if self.experiment == 'qi-transfer' and self.target is None:
            raise ValueError('qi-transfer needs a target provider')
        return self

    def experiment_params(self) -> _Params:
        try:
            return PARAM_MODELS[self.experiment].model_validate(self.params)
        except ValidationError as e:
            raise ConfigError(_format_errors(e, prefix = 'params')) from e


def _format_errors(e: ValidationError, prefix: Optional[str] = None) -> str:
    lines = []
    for err in e.errors():
        loc = [str(x) for x in err['loc']]
        if prefix:
            loc.insert(0, prefix)
        lines.append(f'{".".join(loc) or "<root>"}: {err["msg"]}')
    return '; '.join(lines)


def parse_config(data: Any, source: str = '<config>') -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError(f'{source}: expected a mapping at the top level')
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f'{source}: {_format_errors(e)}') from e
    try:
        config.experiment_params()
    except ConfigError as e:
        raise ConfigError(f'{source}: {e}') from e
    return config


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f'cannot read config {path}: {e}') from e
    except yaml.YAMLError as e:
        raise ConfigError(f'{path}: invalid YAML: {e}') from e
    return parse_config(data, source = path)
