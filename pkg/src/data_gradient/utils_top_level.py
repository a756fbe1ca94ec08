import enum
import logging
import pathlib
import typing

import pydantic

from .datagrad import RegularizerKind, TrainConfig, WeightPenalty
from .robustness import DEFAULT_PHI_GRID, AttackConfig, AttackHead

LOGGER = logging.getLogger(__name__)

DEFAULT_HIDDEN_SIZES = [784, 784, 784]


class ConfigurationError(ValueError):
    pass


class RunMode(str, enum.Enum):
    RECT = "rect"
    L1 = "l1"
    L2 = "l2"
    DGL1 = "dgl1"
    DGL2 = "dgl2"
    MT = "mt"
    MT_DGL1 = "mt_dgl1"
    MT_DGL2 = "mt_dgl2"

    @property
    def multitask(self: "RunMode") -> bool:
        return self in {RunMode.MT, RunMode.MT_DGL1, RunMode.MT_DGL2}

    @property
    def data_regularised(self: "RunMode") -> bool:
        return self in {RunMode.DGL1, RunMode.DGL2, RunMode.MT_DGL1, RunMode.MT_DGL2}

    @property
    def regularizer_kind(self: "RunMode") -> RegularizerKind:
        match self:
            case RunMode.L2 | RunMode.DGL2 | RunMode.MT_DGL2:
                return RegularizerKind.L2
            case _:
                return RegularizerKind.L1

    @property
    def hyperparameters(self: "RunMode") -> set[str]:
        """Mode-specific hyperparameters; the rest of them are ignored by the mode."""
        used: set[str] = set()

        if self in {RunMode.L1, RunMode.L2}:
            used.add("penalty")

        if self.data_regularised:
            used.update({"lambda1", "fd_step"})

        if self.multitask:
            used.add("gamma")

        return used


MODE_HYPERPARAMETERS = {"lambda1", "fd_step", "gamma", "penalty"}


class RunConfig(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    mode: RunMode = RunMode.RECT
    seed: int = 0
    eta: pydantic.PositiveFloat = 0.1005
    lambda1: pydantic.NonNegativeFloat = 0.05
    fd_step: pydantic.PositiveFloat = 0.0525
    gamma: pydantic.NonNegativeFloat = 0.5
    penalty: pydantic.NonNegativeFloat = 0.005
    epochs: pydantic.PositiveInt = 30
    batch_size: pydantic.PositiveInt = 100
    validation_count: pydantic.NonNegativeInt = 10000
    hidden_sizes: list[pydantic.PositiveInt] = pydantic.Field(
        default_factory=lambda: list(DEFAULT_HIDDEN_SIZES), min_length=1
    )
    train_images: pathlib.Path | None = None
    train_labels: pathlib.Path | None = None
    test_images: pathlib.Path | None = None
    test_labels: pathlib.Path | None = None
    out: pathlib.Path | None = None
    phi_grid: list[pydantic.NonNegativeFloat] = pydantic.Field(
        default_factory=lambda: list(DEFAULT_PHI_GRID), min_length=1
    )
    attack_kind: RegularizerKind = RegularizerKind.L1
    attack_head: AttackHead = AttackHead.DIGIT
    force: bool = False

    @pydantic.field_validator("hidden_sizes", "phi_grid", mode="before")
    @classmethod
    def split_commas(cls: type["RunConfig"], value: typing.Any) -> typing.Any:  # noqa: ANN401
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]

        return value

    def required(self: "RunConfig", field: str) -> pathlib.Path:
        value = getattr(self, field)

        if value is None:
            LOGGER.error(f"{field} is missing for mode {self.mode.value}")

            raise ConfigurationError(f"missing required configuration field '{field}'")

        return typing.cast(pathlib.Path, value)


CONFIG_KEYS = frozenset(RunConfig.model_fields)


@pydantic.validate_call(validate_return=True)
def parse_config_file(config_path: pathlib.Path) -> dict[str, str]:
    """Read ``key = value`` lines, ignoring blank lines and ``#`` comments.

    >>> import tempfile
    >>> with tempfile.TemporaryDirectory() as directory:
    ...     path = pathlib.Path(directory) / "run.cfg"
    ...     _ = path.write_text("mode = dgl1  # data gradient\\n\\nseed=3\\n")
    ...     parse_config_file(path)
    {'mode': 'dgl1', 'seed': '3'}
    """
    if not config_path.exists():
        LOGGER.error(f"{config_path=} refers to a non-existing file")

        raise FileNotFoundError(f"Configuration file {config_path} is missing.")

    entries: dict[str, str] = {}

    for number, line in enumerate(config_path.read_text(encoding="utf-8").splitlines(), start=1):
        content = line.split("#", maxsplit=1)[0].strip()

        if not content:
            continue

        key, separator, value = (part.strip() for part in content.partition("="))

        if not separator or not key:
            LOGGER.error(f"{config_path}:{number}: {line=}")

            raise ConfigurationError(f"line {number} of {config_path} is not 'key = value'")

        if key not in CONFIG_KEYS:
            LOGGER.error(f"{config_path}:{number}: unknown {key=}")

            raise ConfigurationError(f"unknown configuration field '{key}'")

        if key in entries:
            LOGGER.error(f"{config_path}:{number}: repeated {key=}")

            raise ConfigurationError(f"configuration field '{key}' is given twice")

        entries[key] = value

    return entries


def resolve_run_config(
    config_path: pathlib.Path | None, overrides: dict[str, typing.Any]
) -> RunConfig:
    """Merge defaults, the configuration file and command-line overrides, in rising priority."""
    values: dict[str, typing.Any] = {} if config_path is None else parse_config_file(config_path)
    values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        return RunConfig.model_validate(values)
    except pydantic.ValidationError as error:
        fields = ", ".join(sorted({str(detail["loc"][0]) for detail in error.errors()}))
        LOGGER.error(f"invalid configuration: {error}")

        raise ConfigurationError(f"invalid configuration field(s): {fields}") from error


def build_attack_config(config: RunConfig) -> AttackConfig:
    try:
        return AttackConfig(
            kind=config.attack_kind, phi_grid=config.phi_grid, use_head=config.attack_head
        )
    except pydantic.ValidationError as error:
        LOGGER.error(f"invalid attack settings: {error}")

        raise ConfigurationError("invalid configuration field(s): phi_grid") from error


def build_train_config(config: RunConfig) -> TrainConfig:
    given = config.model_fields_set & MODE_HYPERPARAMETERS
    ignored = sorted(given - config.mode.hyperparameters)

    for field in ignored:
        LOGGER.warning(f"Ignoring {field}={getattr(config, field)} for mode {config.mode.value}.")

    used = config.mode.hyperparameters

    return TrainConfig(
        eta=config.eta,
        lambda1=config.lambda1 if "lambda1" in used else 0.0,
        fd_step=config.fd_step,
        reg_kind=config.mode.regularizer_kind,
        weight_penalty=(
            WeightPenalty(kind=config.mode.regularizer_kind, coefficient=config.penalty)
            if "penalty" in used
            else None
        ),
        batch_size=config.batch_size,
        epochs=config.epochs,
        seed=config.seed,
        gamma=config.gamma if "gamma" in used else 0.0,
    )


__all__ = [
    "CONFIG_KEYS",
    "DEFAULT_HIDDEN_SIZES",
    "MODE_HYPERPARAMETERS",
    "ConfigurationError",
    "RunConfig",
    "RunMode",
    "build_attack_config",
    "build_train_config",
    "parse_config_file",
    "resolve_run_config",
]
