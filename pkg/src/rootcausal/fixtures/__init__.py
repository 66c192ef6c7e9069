"""Bundled example networks."""

from __future__ import annotations

from importlib import resources

from ..model import Network
from ..netformat import parse_network


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.net").read_text(encoding="utf-8")


def load_fixture(name: str) -> Network:
    return parse_network(fixture_text(name))


def hypertension_network() -> Network:
    """Five risk factors for high blood pressure; two of them are symptoms
    with no causal path to the outcome."""
    return load_fixture("hypertension")


def gear_drive_network() -> Network:
    """Seven failure causes for a harmonic gear drive: five root components
    feeding two subsystem variables."""
    return load_fixture("geardrive")
