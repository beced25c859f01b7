"""Problem input files: variables, variety equations and named divisors."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .poly import DEFAULT_PRIME, Ideal, ParseError, Ring

_RESERVED = re.compile(r"^(H|[cdPQ]\d.*|[a-z])$")


class SpecError(ValueError):
    """Malformed problem file."""


@dataclass
class ProblemSpec:
    variables: list
    variety: list
    divisors: dict = field(default_factory=dict)
    prime: int | None = None
    name: str | None = None

    def __post_init__(self):
        if not isinstance(self.variables, list) or not all(isinstance(v, str) for v in self.variables):
            raise SpecError("'variables' must be a list of names")
        if not isinstance(self.variety, list) or not all(isinstance(g, str) for g in self.variety):
            raise SpecError("'variety' must be a list of polynomial strings")
        if not isinstance(self.divisors, dict):
            raise SpecError("'divisors' must map names to lists of polynomial strings")
        for nm, gens in self.divisors.items():
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm) or _RESERVED.match(nm):
                raise SpecError(
                    f"divisor name {nm!r} is not usable (reserved: H, single lowercase letters, c1.., d1.., P1..)"
                )
            if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
                raise SpecError(f"divisor {nm!r} must be a list of polynomial strings")

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise SpecError("problem file must hold a JSON object")
        unknown = set(data) - {"variables", "variety", "divisors", "prime", "name"}
        if unknown:
            raise SpecError(f"unknown keys in problem file: {sorted(unknown)}")
        try:
            return cls(
                variables=data["variables"],
                variety=data.get("variety", []),
                divisors=data.get("divisors", {}),
                prime=data.get("prime"),
                name=data.get("name"),
            )
        except KeyError as exc:
            raise SpecError(f"missing key {exc}") from None

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def to_dict(self):
        out = {}
        if self.name is not None:
            out["name"] = self.name
        out["variables"] = list(self.variables)
        out["variety"] = list(self.variety)
        out["divisors"] = {k: list(v) for k, v in self.divisors.items()}
        if self.prime is not None:
            out["prime"] = self.prime
        return out

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def ring(self):
        try:
            return Ring(self.variables)
        except ValueError as exc:
            raise SpecError(str(exc)) from None

    def _ideal(self, ring, texts, what):
        gens = []
        for t in texts:
            try:
                gens.append(ring.parse(t))
            except ParseError as exc:
                raise SpecError(f"{what}: {exc} in {t!r}") from None
        try:
            return Ideal(ring, gens)
        except ValueError as exc:
            raise SpecError(f"{what}: {exc}") from None

    def ideals(self, prime=None, divisor_names=None):
        """(X ideal, [divisor ideals]) over GF(prime)."""
        prime = prime or self.prime or DEFAULT_PRIME
        ring = self.ring()
        names = list(self.divisors) if divisor_names is None else list(divisor_names)
        for nm in names:
            if nm not in self.divisors:
                raise SpecError(f"unknown divisor {nm!r}")
        try:
            X = self._ideal(ring, self.variety, "variety").reduce_mod_p(prime)
            divs = [
                self._ideal(ring, self.divisors[nm], f"divisor {nm}").reduce_mod_p(prime)
                for nm in names
            ]
        except ZeroDivisionError as exc:
            raise SpecError(str(exc)) from None
        return X, divs, names
