from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, TextIO

from ..certreal.enclosure import Enclosure, enclosure_from_json, enclosure_to_json
from ..polyring import Poly


@dataclass(frozen=True)
class MinimalRecord:
    """One step of the minimal-polynomial sequence.

    ``value`` encloses ``|P(xi)|``; ``certified`` is True only when the
    minimality over all heights up to ``X`` was established exhaustively.
    """

    i: int
    X: int
    P: Poly
    value: Enclosure
    exact_zero: bool = False
    certified: bool = True

    def to_json(self) -> dict:
        lo, hi = enclosure_to_json(self.value)
        return {
            "i": self.i,
            "X": self.X,
            "coeffs": list(self.P.padded(3)),
            "value_lo": lo,
            "value_hi": hi,
            "exact_zero": self.exact_zero,
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, d: dict) -> "MinimalRecord":
        return cls(
            i=int(d["i"]),
            X=int(d["X"]),
            P=Poly(int(c) for c in d["coeffs"]),
            value=enclosure_from_json((d["value_lo"], d["value_hi"])),
            exact_zero=bool(d["exact_zero"]),
            certified=bool(d["certified"]),
        )


def dumps_records(records: Iterable[MinimalRecord]) -> str:
    return "".join(json.dumps(r.to_json(), separators=(",", ":")) + "\n" for r in records)


def write_records(records: Iterable[MinimalRecord], fh: TextIO) -> None:
    fh.write(dumps_records(records))


def read_records(fh: TextIO) -> list[MinimalRecord]:
    return [MinimalRecord.from_json(json.loads(line)) for line in fh if line.strip()]
