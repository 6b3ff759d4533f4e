import logging
from pathlib import Path

PROGRAM = "noesis"
RULE = "-" * 72


def setup_logger(file_name: Path | None = None) -> None:
    logging.basicConfig(
        filename=file_name,
        level=logging.INFO,
        format="%(asctime)s %(levelname)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def inputs_text(inputs: dict) -> str:
    """The files a command reads, e.g. "bat=data/move.bat prog=data/x.prog"."""
    return " ".join(f"{k}={v}" for k, v in inputs.items() if v is not None)


def started(file_name: Path | None, command: str, inputs: dict | None = None) -> None:
    setup_logger(file_name)
    logging.info(RULE)
    msg = f"{PROGRAM} {command}: begin {inputs_text(inputs or {})}".rstrip()
    logging.info(msg)


def finished(command: str, code: int) -> None:
    msg = f"{PROGRAM} {command}: done, exit code {code}"
    logging.info(msg)
