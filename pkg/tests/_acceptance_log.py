"""Shared store for acceptance results, printed by the terminal summary hook."""

RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, msg: str = "") -> None:
    RESULTS[k] = (bool(ok), msg)
