"""Command-line simulation driver: spins up in-process BCA and resource
servers, generates user populations and probe streams, and reproduces the
reported experiments as CSV."""

from bcauth.harness.client import SensorClient
from bcauth.harness.runs import (
    Stack,
    build_stack,
    run_e2e,
    run_fig8,
    run_fpir_check,
    run_six_users,
    warmup_transactions,
)

__all__ = [
    "SensorClient",
    "Stack",
    "build_stack",
    "run_e2e",
    "run_fig8",
    "run_fpir_check",
    "run_six_users",
    "warmup_transactions",
]
