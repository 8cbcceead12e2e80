"""Containers shared by the resonance solvers."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Resonance:
    """A resonance ``lam`` (Im < 0) of angular momentum ``ell``.

    ``multiplicity`` already includes the spherical-harmonic degeneracy;
    ``ell`` is ``-1`` when the obstacle has no rotational symmetry.
    """

    lam: complex
    ell: int
    multiplicity: int
    residual: float = 0.0

    def __post_init__(self):
        if not self.lam.imag < 0:
            raise ValueError(f"resonances lie in Im < 0, got {self.lam}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def width(self) -> float:
        return -self.lam.imag

    def as_dict(self) -> dict:
        return {
            "re": self.lam.real,
            "im": self.lam.imag,
            "ell": self.ell,
            "mult": self.multiplicity,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle in the complex frequency plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate box {self}")

    @classmethod
    def around(cls, center: complex, half_width: float, half_height: float = None) -> "ComplexBox":
        if half_height is None:
            half_height = half_width
        return cls(center.real - half_width, center.real + half_width,
                   center.imag - half_height, center.imag + half_height)

    @classmethod
    def default_search(cls, kappa: float, lmax: int, R: float = None) -> "ComplexBox":
        """Search box bracketing momenta up to ``lmax``.

        The frequency unit is ``kappa``; for an obstacle of radius ``R`` below
        the curvature radius it grows to ``1/R``, capped at ``4 kappa`` since
        deeper boxes are beyond the reach of the double-precision series.
        """
        unit = kappa if R is None else kappa * min(max(1.0, 1.0 / (kappa * R)), 4.0)
        return cls(-(lmax + 5) * unit, (lmax + 5) * unit, -(lmax + 3) * unit, -1e-3 * unit)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def diameter(self) -> float:
        return abs(complex(self.width, self.height))

    def contains(self, z: complex) -> bool:
        return self.re_min <= z.real <= self.re_max and self.im_min <= z.imag <= self.im_max

    def dilate(self, factor: float) -> "ComplexBox":
        c = self.center
        hw, hh = 0.5 * self.width * factor, 0.5 * self.height * factor
        return ComplexBox(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)
