"""A named finite model: a presentation plus optional cycle-class map."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .linalg import rank_and_kernel
from .ring import RingElement, RingHom, RingPresentation


@dataclass(eq=False)
class Model:
    id: str
    kind: str
    presentation: RingPresentation
    g: int | None = None
    cycle_class: RingHom | None = None
    lefschetz_class: RingElement | None = None

    @property
    def n(self) -> int:
        return self.presentation.truncation_dim

    @property
    def kweights(self) -> dict[str, int]:
        return {gen.name: gen.kweight for gen in self.presentation.generators}

    def element(self, data) -> RingElement:
        return self.presentation.element(data)

    def hom_basis(self, p: int) -> list[tuple]:
        """Coordinate vectors (in ``presentation.basis(p)``) spanning ker(cl) in codim p."""
        if self.cycle_class is None:
            raise InputError(f"model {self.id} has no cycle class map")
        lm = self.cycle_class.matrix(p)
        if not lm.codomain_basis:
            return [tuple(int(i == j) for i in range(len(lm.domain_basis))) for j in range(len(lm.domain_basis))]
        return rank_and_kernel(lm.matrix)[1]

    def hom_elements(self, p: int) -> list[RingElement]:
        return [self.presentation.from_vector(v, p) for v in self.hom_basis(p)]

    def __repr__(self) -> str:
        return f"Model({self.id!r})"


def as_model(obj) -> Model:
    if isinstance(obj, Model):
        return obj
    if hasattr(obj, "as_model"):
        return obj.as_model()
    if isinstance(obj, RingPresentation):
        return Model(obj.label, "custom", obj)
    raise InputError(f"not a model: {obj!r}")
