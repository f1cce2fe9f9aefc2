"""Bundled classic monthly datasets, checksum-verified at load time."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

from ..exceptions import CorruptBundle, UnknownDataset
from ..io import loads_csv
from ..timeindex import MONTHLY, TimeStep
from ..timeseries import TimeSeries


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    frequency: TimeStep
    length: int
    source_file: str
    sha256: str


_REGISTRY: dict[str, DatasetDescriptor] = {
    d.name: d
    for d in (
        DatasetDescriptor(
            name="air_passengers",
            frequency=MONTHLY,
            length=144,
            source_file="air_passengers.csv",
            sha256="5d6aa21558b35236c3ee86305485c8ad26b2d0945c0d905dfa765d75788dda3b",
        ),
        DatasetDescriptor(
            name="monthly_milk",
            frequency=MONTHLY,
            length=168,
            source_file="monthly_milk.csv",
            sha256="d2359bd46f280ed282316e168358bce37e5fe6e8979c7f4a273fe0f47393d9e5",
        ),
    )
}


def list_datasets() -> list[DatasetDescriptor]:
    return list(_REGISTRY.values())


def load(name: str) -> TimeSeries:
    """Load a bundled dataset by name as a deterministic univariate series."""
    try:
        desc = _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise UnknownDataset(f"unknown dataset {name!r} (available: {known})") from None
    text = (
        resources.files(__package__).joinpath("data", desc.source_file).read_text()
    )
    digest = hashlib.sha256(text.encode()).hexdigest()
    if digest != desc.sha256:
        raise CorruptBundle(
            f"dataset {name!r}: checksum {digest} does not match recorded {desc.sha256}"
        )
    series = loads_csv(text)
    if len(series) != desc.length:
        raise CorruptBundle(
            f"dataset {name!r}: expected {desc.length} rows, parsed {len(series)}"
        )
    return series
