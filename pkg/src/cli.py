import logging
import pathlib
import sys
import typing

import typer

from data_gradient.top_level import attack_model, sweep_models, train_model_run
from data_gradient.utils_top_level import ConfigurationError, RunMode, resolve_run_config

CLI_APPLICATION = typer.Typer(name="CLI for data-gradient regularisation experiments")

CONFIGURATION_FAILURES = (ConfigurationError, FileExistsError, FileNotFoundError)
RUNTIME_FAILURES = (ArithmeticError, ValueError, OSError)


def run_command(action: typing.Callable[[], pathlib.Path], message: str) -> None:
    try:
        output_path = action()
    except CONFIGURATION_FAILURES as error:
        typer.echo(message=str(error), err=True)
        sys.exit(1)
    except RUNTIME_FAILURES as error:
        typer.echo(message=str(error), err=True)
        sys.exit(2)
    else:
        typer.echo(f"{message}: '{output_path}'.")


@CLI_APPLICATION.callback()
def configure_logging(log_level: str = "INFO") -> None:
    logging.basicConfig(
        format="{asctime} {levelname} {name}: {message}", style="{", level=log_level.upper()
    )


@CLI_APPLICATION.command()
def train(  # noqa: PLR0913
    config: typing.Optional[pathlib.Path] = None,
    mode: typing.Optional[RunMode] = None,
    seed: typing.Optional[int] = None,
    eta: typing.Optional[float] = None,
    lambda1: typing.Optional[float] = None,
    fd_step: typing.Optional[float] = None,
    gamma: typing.Optional[float] = None,
    epochs: typing.Optional[int] = None,
    batch_size: typing.Optional[int] = None,
    out: typing.Optional[pathlib.Path] = None,
    force: typing.Optional[bool] = None,
) -> None:
    overrides = {
        "mode": mode,
        "seed": seed,
        "eta": eta,
        "lambda1": lambda1,
        "fd_step": fd_step,
        "gamma": gamma,
        "epochs": epochs,
        "batch_size": batch_size,
        "out": out,
        "force": force,
    }

    run_command(
        lambda: train_model_run(resolve_run_config(config, overrides)), "Training complete"
    )


@CLI_APPLICATION.command()
def attack(  # noqa: PLR0913
    attacker: pathlib.Path,
    phi: float,
    config: typing.Optional[pathlib.Path] = None,
    seed: typing.Optional[int] = None,
    out: typing.Optional[pathlib.Path] = None,
    force: typing.Optional[bool] = None,
) -> None:
    overrides = {"seed": seed, "out": out, "force": force}

    run_command(
        lambda: attack_model(resolve_run_config(config, overrides), attacker, phi),
        "Adversarial test set complete",
    )


@CLI_APPLICATION.command()
def sweep(  # noqa: PLR0913
    defender: typing.Annotated[list[pathlib.Path], typer.Option()],
    attacker: typing.Annotated[list[pathlib.Path], typer.Option()],
    config: typing.Optional[pathlib.Path] = None,
    seed: typing.Optional[int] = None,
    phi_grid: typing.Optional[str] = None,
    out: typing.Optional[pathlib.Path] = None,
    force: typing.Optional[bool] = None,
) -> None:
    overrides = {"seed": seed, "phi_grid": phi_grid, "out": out, "force": force}

    run_command(
        lambda: sweep_models(resolve_run_config(config, overrides), defender, attacker),
        "Robustness sweep complete",
    )


if __name__ == "__main__":
    CLI_APPLICATION()
