"""Geometry of the correlation vector ``v`` and Monte Carlo volume fractions.

For Bell-diagonal states (``r = s = 0``) the physical ``v`` fill the
tetrahedron with vertices ``(-1,1,1), (1,-1,1), (1,1,-1), (-1,-1,-1)`` and
the separable ones the octahedron ``sum |v_k| <= 1``. Points outside the
octahedron give ``N = sum |v_k| > 1`` and hence teleportation fidelity
above 2/3.
"""

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from ._validation import PSD_TOL, DomainError, check_vector3
from .states import canonical_matrix, entropy_from_eigenvalues

TETRAHEDRON_VERTICES = np.array(
    [[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]]
)
OCTAHEDRON_VERTICES = np.vstack([np.eye(3), -np.eye(3)])

MIN_SAMPLES = 10_000
DEFAULT_SAMPLES = 10_000_000
SHARD_SIZE = 500_000


def _facets(vertices):
    """Outward half-spaces ``normal . v <= offset`` of a tetrahedron, one per vertex."""
    normals, offsets = [], []
    for k in range(len(vertices)):
        a, b, c = np.delete(vertices, k, axis=0)
        n = np.cross(b - a, c - a)
        off = n @ a
        # orient so the opposite vertex lies inside
        if n @ vertices[k] > off:
            n, off = -n, -off
        scale = np.abs(off)
        normals.append(n / scale)
        offsets.append(off / scale)
    return np.array(normals), np.array(offsets)


TETRAHEDRON_NORMALS, TETRAHEDRON_OFFSETS = _facets(TETRAHEDRON_VERTICES)


def in_tetrahedron(v, tol=1e-12):
    v = check_vector3(v, "v")
    return np.all(v @ TETRAHEDRON_NORMALS.T <= TETRAHEDRON_OFFSETS + tol, axis=-1)


def in_octahedron(v, tol=1e-12):
    v = check_vector3(v, "v")
    return np.abs(v).sum(axis=-1) <= 1.0 + tol


class RegionLabel(str, Enum):
    UNPHYSICAL = "unphysical"
    PHYSICAL_IN_O = "physical_in_O"
    USEFUL_TELEPORT = "useful_teleport"
    NEGATIVE_COND_ENTROPY = "negative_cond_entropy"


_LABELS = list(RegionLabel)


def _marginal_entropy_b(s):
    n = np.linalg.norm(s)
    return float(entropy_from_eigenvalues(np.array([(1 + n) / 2, (1 - n) / 2])))


def _classify_codes(v, r, s, h_b=None):
    """Integer region codes (index into ``RegionLabel``) for a batch of ``v``.

    ``r`` and ``s`` are fixed; the marginal of B only depends on ``s`` so its
    entropy is computed once.
    """
    m = canonical_matrix(r, s, v)
    if not (np.any(r[1]) or np.any(s[1])):
        # no sigma_y local terms: the matrix is real symmetric
        m = m.real
    w = np.linalg.eigvalsh(m)
    physical = w[:, 0] >= -PSD_TOL
    # same tolerance as in_octahedron so grid points on the boundary stay in O
    useful = physical & (np.abs(v).sum(axis=1) > 1.0 + 1e-12)
    if h_b is None:
        h_b = _marginal_entropy_b(s)
    w = np.where(physical[:, None], w, 0.25)
    negative = useful & (entropy_from_eigenvalues(w) - h_b < 0.0)
    codes = np.zeros(len(v), dtype=np.int8)
    codes[physical] = 1
    codes[useful] = 2
    codes[negative] = 3
    return codes


def classify(v, r=(0, 0, 0), s=(0, 0, 0)):
    """Region of a single canonical state, tested in the order physical, F_av > 2/3, H(A|B) < 0.

    Each test only runs when the previous one passed, so every label implies
    the ones before it. For Bell-diagonal states ``H(A|B) < 0`` already forces
    ``F_av > 2/3``; with nonzero ``r``, ``s`` rare states with ``H(A|B) < 0``
    and ``sum |v_k| <= 1`` exist and are labelled ``physical_in_O``.
    """
    v = check_vector3(v, "v", bound=1.0)
    r = check_vector3(r, "r", bound=1.0)
    s = check_vector3(s, "s", bound=1.0)
    code = _classify_codes(v[None, :], r, s)[0]
    return _LABELS[code]


@dataclass
class FractionReport:
    n_samples: int
    seed: int
    r: list
    s: list
    n_physical: int
    n_useful: int
    n_negH: int
    frac_physical: float
    frac_useful_of_physical: float
    frac_negH_of_physical: float
    frac_negH_of_useful: float
    stderr_physical: float
    stderr_useful_of_physical: float
    stderr_negH_of_physical: float
    stderr_negH_of_useful: float

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _ratio(num, den):
    if den == 0:
        return 0.0, 0.0
    p = num / den
    return p, float(np.sqrt(p * (1 - p) / den))


def _count_shard(seed_seq, size, r, s, h_b):
    rng = np.random.default_rng(seed_seq)
    v = rng.uniform(-1.0, 1.0, size=(size, 3))
    codes = _classify_codes(v, r, s, h_b)
    return np.bincount(codes, minlength=4)


def sample_fractions(r=(0, 0, 0), s=(0, 0, 0), n=DEFAULT_SAMPLES, seed=42, n_jobs=1, progress=None):
    """Estimate region fractions from ``n`` uniform draws of ``v`` in ``[-1, 1]^3``.

    The sample stream is split into fixed shards of ``SHARD_SIZE`` draws, each
    with its own child of ``SeedSequence(seed)``. Counts depend only on
    ``(seed, n)``, never on ``n_jobs``.

    Parameters
    ----------
    r, s : array-like of 3 floats
        Local Bloch vectors, held fixed.
    n : int
        Number of samples, at least ``MIN_SAMPLES``.
    seed : int
        Seed of the root ``SeedSequence``.
    n_jobs : int
        Worker threads; LAPACK releases the GIL so threads scale.
    progress : callable, optional
        Called as ``progress(done, total)`` after each shard.
    """
    if n < MIN_SAMPLES:
        raise DomainError(f"n={n} is below the minimum of {MIN_SAMPLES} samples")
    r = check_vector3(r, "r", bound=1.0)
    s = check_vector3(s, "s", bound=1.0)
    h_b = _marginal_entropy_b(s)
    sizes = [SHARD_SIZE] * (n // SHARD_SIZE)
    if n % SHARD_SIZE:
        sizes.append(n % SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    counts = np.zeros(4, dtype=np.int64)
    done = 0
    with ThreadPoolExecutor(max_workers=max(1, n_jobs)) as pool:
        futures = [pool.submit(_count_shard, ss, size, r, s, h_b) for ss, size in zip(children, sizes)]
        for fut, size in zip(futures, sizes):
            counts += fut.result()
            done += size
            if progress is not None:
                progress(done, n)

    n_phys = int(counts[1:].sum())
    n_useful = int(counts[2:].sum())
    n_neg = int(counts[3])
    f_phys, e_phys = _ratio(n_phys, n)
    f_use, e_use = _ratio(n_useful, n_phys)
    f_neg, e_neg = _ratio(n_neg, n_phys)
    f_neg_use, e_neg_use = _ratio(n_neg, n_useful)
    return FractionReport(
        n_samples=int(n),
        seed=int(seed),
        r=r.tolist(),
        s=s.tolist(),
        n_physical=n_phys,
        n_useful=n_useful,
        n_negH=n_neg,
        frac_physical=f_phys,
        frac_useful_of_physical=f_use,
        frac_negH_of_physical=f_neg,
        frac_negH_of_useful=f_neg_use,
        stderr_physical=e_phys,
        stderr_useful_of_physical=e_use,
        stderr_negH_of_physical=e_neg,
        stderr_negH_of_useful=e_neg_use,
    )


def region_mesh(r=(0, 0, 0), s=(0, 0, 0), resolution=21):
    """Labels on a regular ``resolution^3`` grid over the cube ``[-1, 1]^3``."""
    if resolution < 10:
        raise DomainError("resolution must be at least 10 points per axis")
    r = check_vector3(r, "r", bound=1.0)
    s = check_vector3(s, "s", bound=1.0)
    axis = np.linspace(-1.0, 1.0, resolution)
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    codes = _classify_codes(grid, r, s)
    return [(tuple(float(c) for c in v), _LABELS[k]) for v, k in zip(grid, codes)]


def write_mesh_csv(mesh, path_or_file):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["v1", "v2", "v3", "label"])
        for v, label in mesh:
            writer.writerow([repr(v[0]), repr(v[1]), repr(v[2]), label.value])
    finally:
        if own:
            fh.close()
