"""Controlled multi-party teleportation simulator."""

from ghzt._core import (
    audit,
    branch_average_fidelity,
    hinton_svg,
    random_message,
    run,
    table,
    verify,
)

__all__ = [
    "audit",
    "branch_average_fidelity",
    "hinton_svg",
    "random_message",
    "run",
    "table",
    "verify",
]
