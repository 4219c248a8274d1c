"""Symmetric 2x2 surface tensors and the fourth-order product algebra.

Everything here operates on components in a local orthonormal surface frame.
Curvilinear component sets are produced only by the geometry module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


class FrameMismatchError(ValueError):
    """Raised when two tensors with different frame tags are combined."""


class NotPositiveDefiniteError(ValueError):
    """Raised when a right Cauchy-Green input fails det > 0, tr > 0."""


@dataclass(frozen=True, slots=True)
class SurfTensor2:
    """Symmetric second-order surface tensor, three stored components."""

    c11: float
    c22: float
    c12: float
    frame_tag: str = "default"

    def trace(self) -> float:
        return self.c11 + self.c22

    def det(self) -> float:
        return self.c11 * self.c22 - self.c12 * self.c12

    def ddot(self, other: "SurfTensor2") -> float:
        """Full contraction a:b; off-diagonal entries count twice."""
        _check_frames(self, other)
        return self.c11 * other.c11 + self.c22 * other.c22 + 2.0 * self.c12 * other.c12

    def scaled(self, s: float) -> "SurfTensor2":
        return replace(self, c11=s * self.c11, c22=s * self.c22, c12=s * self.c12)

    def plus(self, other: "SurfTensor2", w: float = 1.0) -> "SurfTensor2":
        _check_frames(self, other)
        return replace(self, c11=self.c11 + w * other.c11,
                       c22=self.c22 + w * other.c22,
                       c12=self.c12 + w * other.c12)

    def deviator(self) -> "SurfTensor2":
        h = 0.5 * self.trace()
        return replace(self, c11=self.c11 - h, c22=self.c22 - h)

    def inverse(self) -> "SurfTensor2":
        d = self.det()
        if d == 0.0:
            raise ZeroDivisionError("singular surface tensor")
        return replace(self, c11=self.c22 / d, c22=self.c11 / d, c12=-self.c12 / d)

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    @classmethod
    def from_matrix(cls, m, frame_tag: str = "default") -> "SurfTensor2":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[1, 1]),
                   0.5 * float(m[0, 1] + m[1, 0]), frame_tag)

    def require_positive_definite(self) -> None:
        if not (self.det() > 0.0 and self.trace() > 0.0):
            raise NotPositiveDefiniteError(
                f"tensor is not positive definite: det={self.det()}, tr={self.trace()}")


IDENTITY = SurfTensor2(1.0, 1.0, 0.0)


def _check_frames(a: SurfTensor2, b: SurfTensor2) -> None:
    if a.frame_tag != b.frame_tag:
        raise FrameMismatchError(f"frame mismatch: {a.frame_tag!r} vs {b.frame_tag!r}")


@dataclass(frozen=True, slots=True)
class SpectralDecomp:
    """Eigenvalues Lambda1 >= Lambda2, principal stretches, and the angle of
    the maximum-stretch direction, counter-clockwise from the frame's first
    axis, in (-pi/2, pi/2]."""

    Lambda1: float
    Lambda2: float
    lambda1: float
    lambda2: float
    theta: float


def spectral(t: SurfTensor2) -> SpectralDecomp:
    """Closed-form eigendecomposition of a symmetric 2x2 tensor.

    Coincident eigenvalues take theta = 0 by convention.
    """
    mean = 0.5 * (t.c11 + t.c22)
    half_diff = 0.5 * (t.c11 - t.c22)
    disc = math.hypot(half_diff, t.c12)
    L1 = mean + disc
    L2 = mean - disc
    theta = 0.5 * math.atan2(2.0 * t.c12, t.c11 - t.c22)
    s1 = math.sqrt(L1) if L1 > 0.0 else 0.0
    s2 = math.sqrt(L2) if L2 > 0.0 else 0.0
    return SpectralDecomp(L1, L2, s1, s2, theta)


def reconstruct(sd: SpectralDecomp, frame_tag: str = "default") -> SurfTensor2:
    """Sum of Lambda_a Y_a (x) Y_a; inverse of spectral up to rounding."""
    c, s = math.cos(sd.theta), math.sin(sd.theta)
    return SurfTensor2(sd.Lambda1 * c * c + sd.Lambda2 * s * s,
                       sd.Lambda1 * s * s + sd.Lambda2 * c * c,
                       (sd.Lambda1 - sd.Lambda2) * s * c, frame_tag)


def sqrt_spd(t: SurfTensor2) -> SurfTensor2:
    """Symmetric square root of a positive-definite 2x2 tensor.

    Uses the closed form (C + sqrt(det C) I) / sqrt(tr C + 2 sqrt(det C)).
    """
    t.require_positive_definite()
    rd = math.sqrt(t.det())
    scale = 1.0 / math.sqrt(t.trace() + 2.0 * rd)
    return SurfTensor2((t.c11 + rd) * scale, (t.c22 + rd) * scale,
                       t.c12 * scale, t.frame_tag)


@dataclass(frozen=True, slots=True)
class Tangent4:
    """Fourth-order surface tensor, full 16 components, no symmetry packing.

    layout_tag is "standard" for directly assembled elasticity tensors and
    "oplus" for the alternative component ordering used by matrix assembly.
    """

    comp: np.ndarray
    layout_tag: str = "standard"

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.comp * self.comp)))

    def major_transpose(self) -> "Tangent4":
        return Tangent4(np.ascontiguousarray(self.comp.transpose(2, 3, 0, 1)),
                        self.layout_tag)


def _pair_outer(a: SurfTensor2, b: SurfTensor2, rule) -> Tangent4:
    _check_frames(a, b)
    am = a.as_matrix()
    bm = b.as_matrix()
    out = np.empty((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[i, j, k, l] = rule(am, bm, i, j, k, l)
    return Tangent4(out)


def tensor_product(a: SurfTensor2, b: SurfTensor2) -> Tangent4:
    """(a (x) b)^{abgd} = a^{ab} b^{gd}."""
    return _pair_outer(a, b, lambda A, B, i, j, k, l: A[i, j] * B[k, l])


def oplus_product(a: SurfTensor2, b: SurfTensor2) -> Tangent4:
    """(a (+) b)^{abgd} = a^{ad} b^{bg}."""
    return _pair_outer(a, b, lambda A, B, i, j, k, l: A[i, l] * B[j, k])


def boxtimes_product(a: SurfTensor2, b: SurfTensor2) -> Tangent4:
    """(a [x] b)^{abgd} = a^{ag} b^{bd}."""
    return _pair_outer(a, b, lambda A, B, i, j, k, l: A[i, k] * B[j, l])


def sym_tensor_product(a: SurfTensor2, b: SurfTensor2) -> Tangent4:
    """Symmetrized (a (x) b)^S = (a (x) b + b (x) a) / 2."""
    t1 = tensor_product(a, b)
    t2 = tensor_product(b, a)
    return Tangent4(0.5 * (t1.comp + t2.comp))


def rearrange(t: Tangent4) -> Tangent4:
    """Component reordering used to go from assembly order back to the
    standard order: out^{abgd} = in^{agdb}.

    Maps a (+) b to a (x) b, a (x) b to a [x] b^T, and a [x] b to a (+) b^T.
    """
    return Tangent4(np.einsum("agdb->abgd", t.comp),
                    "standard" if t.layout_tag == "oplus" else "oplus")


def rearrange_inverse(t: Tangent4) -> Tangent4:
    """Inverse reordering: out^{abgd} = in^{adbg}; undoes rearrange."""
    return Tangent4(np.einsum("adbg->abgd", t.comp),
                    "oplus" if t.layout_tag == "standard" else "standard")


def tangent_from_pairs(pairs: np.ndarray) -> Tangent4:
    """Expand a 3x3 matrix over index pairs (11, 22, 12) into 16 components."""
    p = np.asarray(pairs, dtype=float)
    out = np.empty((2, 2, 2, 2))
    idx = {(0, 0): 0, (1, 1): 1, (0, 1): 2, (1, 0): 2}
    for ij, pi in idx.items():
        for kl, qi in idx.items():
            out[ij[0], ij[1], kl[0], kl[1]] = p[pi, qi]
    return Tangent4(out)


def rel_diff(x: np.ndarray, y: np.ndarray, floor: float = 1e-300) -> float:
    """Frobenius-relative difference of two component arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    denom = max(np.sqrt(np.sum(y * y)), floor)
    return float(np.sqrt(np.sum((x - y) ** 2)) / denom)
