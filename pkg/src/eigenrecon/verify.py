"""Pairwise verification of reconstruction properties.

Given two symmetric matrices that are supposed to share their spectrum and
their deck of vertex-deleted spectra, this module compares everything that
theory says must then agree: squared eigenvector entries of simple
eigenvalues, projections of the all-ones vector onto matching eigenspaces,
simple eigenvectors not orthogonal to the all-ones vector (up to sign), and
the lowest eigenpair of A + t*J across a sample of shifts t. A brute-force
probe searches for a coordinate permutation mapping one simple eigenvector
onto the other on small instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import EigenBasis, SymmetricMatrix, deck, eigh
from .secular import rank1_update
from .squares import SquareComparison, compare_squares, square_table_from_deck

SIGN_TOL_SCALE = 1e-10
PROJECTION_TOL_FACTOR = 10.0
ANGLE_TOL = 1e-8
# 16 shifts uniform in the half-open interval (-1, -1/16].
DEFAULT_T_SAMPLES = tuple(-1.0 + k * (15.0 / 16.0) / 16.0 for k in range(1, 17))


def projection_of_ones(basis: EigenBasis, cluster) -> np.ndarray:
    """Orthogonal projection of the all-ones vector onto a cluster eigenspace."""
    idx = list(cluster)
    p = basis.vectors[:, idx]
    ones = np.ones(basis.n)
    return p @ (p.T @ ones)


@dataclass(frozen=True)
class CanonicalVector:
    vector: np.ndarray
    orthogonal_to_ones: bool


def canonicalize_sign_along_ones(v) -> CanonicalVector:
    """Resolve the +/- ambiguity of a unit vector by its overlap with 1.

    Vectors (numerically) orthogonal to the all-ones vector cannot be
    canonicalized this way and are returned unchanged with a flag.
    """
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"expected a unit vector, got norm {norm}")
    overlap = float(np.sum(v))
    sign_tol = SIGN_TOL_SCALE * math.sqrt(len(v))
    if overlap > sign_tol:
        return CanonicalVector(v, False)
    if overlap < -sign_tol:
        return CanonicalVector(-v, False)
    return CanonicalVector(v, True)


def principal_angle(u, v) -> float:
    """Angle between the lines spanned by two unit vectors, in radians.

    Computed from the chord length (sine form), which stays accurate for
    tiny angles where acos of the dot product loses half the digits.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    chord = min(float(np.linalg.norm(u - v)), float(np.linalg.norm(u + v)))
    return 2.0 * math.asin(min(1.0, chord / 2.0))


@dataclass(frozen=True)
class TheoremMainSample:
    """One shift t: lowest eigenpair of A + t*J vs B + t*J, two ways."""

    t: float
    lambda_n_dev: float
    simple_in_a: bool
    simple_in_b: bool
    angle: float
    secular_value_dev: float
    secular_angle: float

    @property
    def conclusive(self) -> bool:
        # Shifts where the lowest eigenvalue is not simple in either matrix
        # fall outside the guaranteed interval and are not failures.
        return self.simple_in_a and self.simple_in_b

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "lambda_n_dev": self.lambda_n_dev,
            "simple_in_a": self.simple_in_a,
            "simple_in_b": self.simple_in_b,
            "angle": self.angle,
            "secular_value_dev": self.secular_value_dev,
            "secular_angle": self.secular_angle,
            "conclusive": self.conclusive,
        }


def verify_theorem_main(A: SymmetricMatrix, B: SymmetricMatrix,
                        t_samples=DEFAULT_T_SAMPLES) -> list[TheoremMainSample]:
    """Lowest eigenpair of A + t*J and B + t*J across sampled shifts.

    Each sample also cross-checks the direct eigendecomposition of A + t*J
    against the secular-equation path through rank1_update(basis of A, 1, t).
    """
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    if not len(t_samples):
        raise ValueError("t_samples must be nonempty")
    n = A.n
    ones = np.ones(n)
    basis_a = eigh(A)
    records = []
    for t in t_samples:
        shifted_a = eigh(SymmetricMatrix.from_array(A.entries + t * np.outer(ones, ones)))
        shifted_b = eigh(SymmetricMatrix.from_array(B.entries + t * np.outer(ones, ones)))
        low_a = float(shifted_a.spectrum.values[-1])
        low_b = float(shifted_b.spectrum.values[-1])
        va = shifted_a.vectors[:, -1]
        vb = shifted_b.vectors[:, -1]

        upd = rank1_update(basis_a, ones, float(t))
        sec_low = float(upd.values[-1])
        sec_vec = upd.vectors[-1]
        sec_angle = principal_angle(va, sec_vec) if sec_vec is not None else math.nan
        records.append(TheoremMainSample(
            t=float(t),
            lambda_n_dev=abs(low_a - low_b),
            simple_in_a=shifted_a.spectrum.is_simple(n - 1),
            simple_in_b=shifted_b.spectrum.is_simple(n - 1),
            angle=principal_angle(va, vb),
            secular_value_dev=abs(low_a - sec_low),
            secular_angle=sec_angle,
        ))
    return records


@dataclass(frozen=True)
class PairReport:
    """Everything verify_gm measured about a candidate hypomorphic pair."""

    n: int
    tol: float
    spectra_dev: float
    deck_devs: tuple[float, ...]
    deck_multiset_devs: tuple[float, ...] | None
    squares: SquareComparison
    projections: tuple[dict, ...]
    signs: tuple[dict, ...]
    theorem_main: tuple[TheoremMainSample, ...]

    @property
    def spectra_equal(self) -> bool:
        return self.spectra_dev <= self.tol

    @property
    def deck_equal(self) -> bool:
        devs = self.deck_multiset_devs if self.deck_multiset_devs is not None \
            else self.deck_devs
        return all(d <= self.tol for d in devs)

    @property
    def passed(self) -> bool:
        checks = [self.spectra_equal, self.deck_equal, self.squares.passed]
        checks += [p["pass"] for p in self.projections]
        checks += [s["pass"] for s in self.signs]
        checks += [
            r.lambda_n_dev <= self.tol and r.angle <= ANGLE_TOL
            for r in self.theorem_main if r.conclusive
        ]
        return all(checks)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "tol": self.tol,
            "pass": self.passed,
            "spectra_equal": {"pass": self.spectra_equal,
                              "max_dev": self.spectra_dev},
            "deck": {
                "pass": self.deck_equal,
                "per_card_dev": list(self.deck_devs),
                "multiset_dev": (None if self.deck_multiset_devs is None
                                 else list(self.deck_multiset_devs)),
            },
            "squares": self.squares.to_dict(),
            "projections": list(self.projections),
            "signs": list(self.signs),
            "theorem_main": [r.to_dict() for r in self.theorem_main],
        }


def verify_gm(A: SymmetricMatrix, B: SymmetricMatrix, tol: float = 1e-8,
              multiset_deck: bool = False,
              t_samples=DEFAULT_T_SAMPLES) -> PairReport:
    """Compare two matrices under the equal-spectra, equal-deck hypothesis.

    Deck cards are compared index-aligned (card m of A against card m of B);
    pass ``multiset_deck=True`` to instead match cards as an unordered
    collection, the convention of classical graph reconstruction.
    """
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    basis_a = eigh(A)
    basis_b = eigh(B)
    spectra_dev = float(np.max(np.abs(
        basis_a.spectrum.values - basis_b.spectrum.values)))

    deck_a = deck(A)
    deck_b = deck(B)
    deck_devs = tuple(
        float(np.max(np.abs(ca.values - cb.values)))
        for ca, cb in zip(deck_a.card_spectra, deck_b.card_spectra)
    )
    multiset_devs = None
    if multiset_deck:
        # Greedy lexicographic matching of sorted cards: sort both decks by
        # eigenvalue tuples and compare positionally.
        sa = sorted(tuple(c.values) for c in deck_a.card_spectra)
        sb = sorted(tuple(c.values) for c in deck_b.card_spectra)
        multiset_devs = tuple(
            float(np.max(np.abs(np.array(ca) - np.array(cb))))
            for ca, cb in zip(sa, sb)
        )

    table_a = square_table_from_deck(basis_a.spectrum, deck_a)
    table_b = square_table_from_deck(basis_b.spectrum, deck_b)
    squares = compare_squares(table_a, table_b, tol)

    projections = []
    if len(basis_a.spectrum.clusters) == len(basis_b.spectrum.clusters):
        for ca, cb in zip(basis_a.spectrum.clusters, basis_b.spectrum.clusters):
            pa = projection_of_ones(basis_a, ca)
            pb = projection_of_ones(basis_b, cb)
            dist = float(np.linalg.norm(pa - pb))
            projections.append({
                "value": float(np.mean(basis_a.spectrum.values[list(ca)])),
                "distance": dist,
                "pass": dist <= PROJECTION_TOL_FACTOR * tol,
            })
    else:
        projections.append({
            "value": None,
            "distance": math.inf,
            "pass": False,
            "note": "cluster structures differ",
        })

    signs = []
    for i in range(A.n):
        if not (basis_a.spectrum.is_simple(i) and basis_b.spectrum.is_simple(i)):
            continue
        ca = canonicalize_sign_along_ones(basis_a.vectors[:, i])
        cb = canonicalize_sign_along_ones(basis_b.vectors[:, i])
        if ca.orthogonal_to_ones or cb.orthogonal_to_ones:
            continue
        dist = float(np.linalg.norm(ca.vector - cb.vector))
        signs.append({"index": i, "distance": dist, "pass": dist <= tol})

    theorem_main = tuple(verify_theorem_main(A, B, t_samples))
    return PairReport(A.n, tol, spectra_dev, deck_devs, multiset_devs,
                      squares, tuple(projections), tuple(signs), theorem_main)


@dataclass(frozen=True)
class PermutationProbe:
    """Outcome of the exhaustive search for a coordinate permutation."""

    found: bool
    permutation: tuple[int, ...] | None
    sign: int | None
    distance: float
    min_distance: float
    pruned: bool = False

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "permutation": None if self.permutation is None
            else list(self.permutation),
            "sign": self.sign,
            "distance": self.distance,
            "min_distance": self.min_distance,
            "pruned": self.pruned,
        }


def probe_permutation_conjecture(A: SymmetricMatrix, B: SymmetricMatrix,
                                 i: int, n_cap: int = 8,
                                 tol: float = 1e-8) -> PermutationProbe:
    """Search all coordinate permutations tau with tau*p_i = +/- u_i.

    Returns the lexicographically first permutation within tolerance, or an
    exhausted result carrying the minimum distance achieved. Before the full
    search, the sorted absolute-value multisets of the two eigenvectors are
    compared: a mismatch is a lower bound on the achievable distance and
    short-circuits the scan.
    """
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    if A.n > n_cap:
        raise ValueError(f"n = {A.n} exceeds cap {n_cap}")
    basis_a = eigh(A)
    basis_b = eigh(B)
    if not basis_a.spectrum.is_simple(i) or not basis_b.spectrum.is_simple(i):
        raise ValueError(f"eigenvalue index {i} is not simple in both matrices")
    p = basis_a.vectors[:, i]
    u = basis_b.vectors[:, i]

    multiset_gap = float(np.linalg.norm(
        np.sort(np.abs(p)) - np.sort(np.abs(u))))
    if multiset_gap > tol:
        # No permutation can beat the optimal sorted pairing of |entries|.
        return PermutationProbe(False, None, None, math.inf,
                                multiset_gap, pruned=True)

    best = math.inf
    for perm in itertools.permutations(range(A.n)):
        tp = p[list(perm)]
        d_plus = float(np.linalg.norm(tp - u))
        d_minus = float(np.linalg.norm(tp + u))
        if d_plus <= tol:
            return PermutationProbe(True, perm, +1, d_plus, d_plus)
        if d_minus <= tol:
            return PermutationProbe(True, perm, -1, d_minus, d_minus)
        best = min(best, d_plus, d_minus)
    return PermutationProbe(False, None, None, math.inf, best)
