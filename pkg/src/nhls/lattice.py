"""Construction of 1D lattice Hamiltonians from labeled segment lists.

A lattice is described by an ordered list of segments (uniform leads and
dimerized gain/loss segments), a boundary condition, and an integer offset
that maps array indices to the signed site labels used throughout
(``site label = array index - origin_offset``).

Hamiltonians carry both a dense complex matrix and the banded arrays
(real hoppings, imaginary diagonal) consumed by the fast propagation
kernels. Instances are immutable after construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .params import ModelParams


class SegmentKind(str, Enum):
    UNIFORM_LEAD = "uniform_lead"
    NH_SSH_SEGMENT = "nh_ssh_segment"


class Boundary(str, Enum):
    OPEN = "open"
    RING = "ring"


class LatticeError(ValueError):
    """Invalid segment list or boundary condition."""


@dataclass(frozen=True)
class SegmentDescriptor:
    """One contiguous block of sites.

    ``gain_first`` applies to gain/loss segments only: when true the
    segment's first site carries ``+i*gamma`` (gain), alternating along the
    segment; when false the pattern starts with loss. Segment length must be
    even for gain/loss segments so gain and loss balance.
    """

    kind: SegmentKind
    length: int
    gain_first: bool = True

    def __post_init__(self) -> None:
        if self.length < 1:
            raise LatticeError(f"segment length must be >= 1, got {self.length}")
        if self.kind is SegmentKind.NH_SSH_SEGMENT and self.length % 2:
            raise LatticeError(
                f"gain/loss segment length must be even, got {self.length}"
            )


def lead(length: int) -> SegmentDescriptor:
    return SegmentDescriptor(SegmentKind.UNIFORM_LEAD, length)


def ssh_segment(length: int, gain_first: bool = True) -> SegmentDescriptor:
    return SegmentDescriptor(SegmentKind.NH_SSH_SEGMENT, length, gain_first)


@dataclass(frozen=True)
class LatticeSpec:
    """Ordered segments plus boundary condition and site-label offset."""

    segments: tuple[SegmentDescriptor, ...]
    boundary: Boundary = Boundary.OPEN
    origin_offset: int = 0

    def __post_init__(self) -> None:
        if not self.segments:
            raise LatticeError("lattice needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.boundary is Boundary.RING and self.has_ssh and self.n_sites % 2:
            raise LatticeError(
                "ring with a gain/loss segment needs an even total site count"
            )

    @property
    def n_sites(self) -> int:
        return sum(s.length for s in self.segments)

    @property
    def has_ssh(self) -> bool:
        return any(s.kind is SegmentKind.NH_SSH_SEGMENT for s in self.segments)

    def label_of(self, array_index):
        """Signed site label for an array index (vectorized)."""
        return np.asarray(array_index) - self.origin_offset

    def index_of(self, label):
        return np.asarray(label) + self.origin_offset

    def site_labels(self) -> np.ndarray:
        return np.arange(self.n_sites) - self.origin_offset

    def segment_windows(self) -> list[tuple[SegmentDescriptor, int, int]]:
        """(descriptor, first, last) in signed site labels, in order."""
        out = []
        pos = 0
        for seg in self.segments:
            out.append((seg, pos - self.origin_offset, pos + seg.length - 1 - self.origin_offset))
            pos += seg.length
        return out


class Hamiltonian:
    """Single-particle Hamiltonian of a lattice spec.

    Off-diagonal entries are the real nearest-neighbor bonds (reciprocal,
    so the matrix is complex symmetric); the diagonal is purely imaginary,
    ``+/- i*gamma`` on gain/loss sites and zero on lead sites. Ring
    boundaries add one corner bond. The banded arrays ``diag_gamma``
    (real, the diagonal divided by i), ``hops`` and ``ring_bond`` are the
    storage consumed by the stepped propagator kernels.
    """

    def __init__(
        self,
        diag_gamma: np.ndarray,
        hops: np.ndarray,
        ring_bond: float,
        spec: LatticeSpec,
        params: ModelParams,
    ):
        n = len(diag_gamma)
        if len(hops) != n - 1:
            raise LatticeError("hops must have length n_sites - 1")
        self.diag_gamma = np.ascontiguousarray(diag_gamma, dtype=float)
        self.hops = np.ascontiguousarray(hops, dtype=float)
        self.ring_bond = float(ring_bond)
        self.spec = spec
        self.params = params
        self.diag_gamma.setflags(write=False)
        self.hops.setflags(write=False)
        self._dense: np.ndarray | None = None
        self._eig: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return len(self.diag_gamma)

    @property
    def matrix(self) -> np.ndarray:
        """Dense complex matrix (built once, then cached read-only)."""
        if self._dense is None:
            n = self.dim
            H = np.zeros((n, n), dtype=complex)
            H[np.arange(n), np.arange(n)] = 1j * self.diag_gamma
            idx = np.arange(n - 1)
            H[idx, idx + 1] = self.hops
            H[idx + 1, idx] = self.hops
            if self.ring_bond:
                H[0, n - 1] = self.ring_bond
                H[n - 1, 0] = self.ring_bond
            H.setflags(write=False)
            self._dense = H
        return self._dense

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        """H @ psi using the banded storage."""
        from . import kernels

        return kernels.matvec_banded(self.diag_gamma, self.hops, self.ring_bond, psi)

    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and right eigenvectors, cached."""
        if self._eig is None:
            w, v = np.linalg.eig(self.matrix)
            w.setflags(write=False)
            v.setflags(write=False)
            self._eig = (w, v)
        return self._eig


def _ssh_bonds(length: int, params: ModelParams) -> np.ndarray:
    """Alternating bonds inside a gain/loss segment: strong, weak, strong, ..."""
    bonds = np.empty(length - 1)
    bonds[0::2] = params.strong_bond
    bonds[1::2] = params.J
    return bonds


def _ssh_diag(length: int, params: ModelParams, gain_first: bool) -> np.ndarray:
    diag = np.empty(length)
    sign = 1.0 if gain_first else -1.0
    diag[0::2] = sign * params.gamma
    diag[1::2] = -sign * params.gamma
    return diag


def assemble(spec: LatticeSpec, params: ModelParams) -> Hamiltonian:
    """Build the Hamiltonian for a segment list.

    Bonds inside a lead are ``J``; bonds inside a gain/loss segment
    alternate starting from the strong bond ``1 + delta``. Every bond
    joining two segments is ``J`` (the lead hopping), as is the closing
    bond of a ring, which continues the alternation of a pure dimerized
    ring ending on its weak bond.
    """
    n = spec.n_sites
    diag = np.zeros(n)
    hops = np.full(max(n - 1, 0), params.J)
    pos = 0
    for seg in spec.segments:
        if seg.kind is SegmentKind.NH_SSH_SEGMENT:
            hops[pos : pos + seg.length - 1] = _ssh_bonds(seg.length, params)
            diag[pos : pos + seg.length] = _ssh_diag(seg.length, params, seg.gain_first)
            if pos + seg.length - 1 < n - 1:
                hops[pos + seg.length - 1] = params.J
        pos += seg.length
    ring_bond = params.J if spec.boundary is Boundary.RING else 0.0
    if spec.boundary is Boundary.RING and n < 3:
        raise LatticeError("ring needs at least 3 sites")
    return Hamiltonian(diag, hops, ring_bond, spec, params)


def build_uniform_chain(n_sites: int, params: ModelParams) -> Hamiltonian:
    """Open uniform chain with hopping J on every bond."""
    if n_sites < 2:
        raise LatticeError(f"uniform chain needs n_sites >= 2, got {n_sites}")
    spec = LatticeSpec((lead(n_sites),))
    return assemble(spec, params)


def build_nh_ssh_segment(
    n_sites: int, params: ModelParams, gain_first: bool = True
) -> Hamiltonian:
    """Open dimerized segment with staggered gain/loss.

    Sites alternate gain/loss starting from the ``gain_first`` choice; bonds
    alternate strong, weak starting from the strong intracell bond.
    """
    if n_sites < 2 or n_sites % 2:
        raise LatticeError(f"segment needs an even n_sites >= 2, got {n_sites}")
    spec = LatticeSpec((ssh_segment(n_sites, gain_first),))
    return assemble(spec, params)


def junction_spec(n_lead: int, n_ssh: int, gain_first: bool = True,
                  boundary: Boundary = Boundary.OPEN) -> LatticeSpec:
    """Lead occupying labels ``-n_lead..-1`` joined to a segment at ``0..n_ssh-1``."""
    return LatticeSpec(
        (lead(n_lead), ssh_segment(n_ssh, gain_first)),
        boundary=boundary,
        origin_offset=n_lead,
    )


def sandwich_spec(n_left: int, inner: Sequence[SegmentDescriptor], n_right: int) -> LatticeSpec:
    """Leads on both sides of an inner block, block centered on label 0."""
    inner = tuple(inner)
    block = sum(s.length for s in inner)
    return LatticeSpec(
        (lead(n_left), *inner, lead(n_right)),
        origin_offset=n_left + block // 2,
    )


def ring_spec(n_sites: int, gain_first: bool = True) -> LatticeSpec:
    """Pure dimerized gain/loss ring closed by a weak bond."""
    return LatticeSpec((ssh_segment(n_sites, gain_first),), boundary=Boundary.RING)


# --- JSON serialization -----------------------------------------------------

def to_json_document(spec: LatticeSpec, params: ModelParams) -> dict:
    doc = {
        "params": {"J": params.J, "delta": params.delta, "gamma": params.gamma},
        "segments": [
            {
                "kind": "lead" if s.kind is SegmentKind.UNIFORM_LEAD else "ssh",
                "length": s.length,
                **({"gain_first": s.gain_first} if s.kind is SegmentKind.NH_SSH_SEGMENT else {}),
            }
            for s in spec.segments
        ],
        "boundary": spec.boundary.value,
    }
    if spec.origin_offset:
        doc["origin_offset"] = spec.origin_offset
    return doc


_KIND_NAMES = {
    "lead": SegmentKind.UNIFORM_LEAD,
    "uniform_lead": SegmentKind.UNIFORM_LEAD,
    "ssh": SegmentKind.NH_SSH_SEGMENT,
    "nh_ssh_segment": SegmentKind.NH_SSH_SEGMENT,
}


def from_json_document(doc: dict) -> tuple[LatticeSpec, ModelParams]:
    """Parse and validate a lattice document; raises LatticeError with the
    offending field on malformed input."""
    if not isinstance(doc, dict):
        raise LatticeError("lattice document must be a JSON object")
    try:
        p = doc["params"]
        params = ModelParams(J=float(p["J"]), delta=float(p["delta"]), gamma=float(p["gamma"]))
    except KeyError as exc:
        raise LatticeError(f"missing params field: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise LatticeError(f"bad params: {exc}") from exc
    raw_segments = doc.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise LatticeError("segments must be a non-empty list")
    segments = []
    for i, raw in enumerate(raw_segments):
        kind = _KIND_NAMES.get(str(raw.get("kind", "")).lower())
        if kind is None:
            raise LatticeError(f"segments[{i}].kind must be 'lead' or 'ssh'")
        try:
            length = int(raw["length"])
        except (KeyError, TypeError, ValueError):
            raise LatticeError(f"segments[{i}].length must be an integer") from None
        segments.append(
            SegmentDescriptor(kind, length, bool(raw.get("gain_first", True)))
        )
    raw_boundary = str(doc.get("boundary", "open")).lower()
    try:
        boundary = Boundary(raw_boundary)
    except ValueError:
        raise LatticeError(f"boundary must be 'open' or 'ring', got {raw_boundary!r}") from None
    spec = LatticeSpec(tuple(segments), boundary, int(doc.get("origin_offset", 0)))
    return spec, params


def load_spec(path) -> tuple[LatticeSpec, ModelParams]:
    with open(path) as fh:
        return from_json_document(json.load(fh))


def save_spec(path, spec: LatticeSpec, params: ModelParams) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_document(spec, params), fh, indent=2)
        fh.write("\n")
