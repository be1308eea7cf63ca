"""Recursive overlapping-subsample construction over index sequences.

Subsamples are represented as sorted tuples of integer positions into a
master sample; nothing here touches the data itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

IndexSeq = tuple[int, ...]


@dataclass(frozen=True)
class SubsampleFamily:
    master_len: int
    tail: IndexSeq
    subsamples: tuple[IndexSeq, ...]

    def __len__(self) -> int:
        return len(self.subsamples)

    def __iter__(self):
        return iter(self.subsamples)

    def branches(self) -> tuple[tuple[IndexSeq, ...], ...]:
        """Split the family into the three equal top-level recursion branches."""
        n = len(self.subsamples)
        if n % 3:
            raise ValueError(f"family of {n} subsamples has no three-way branch split")
        k = n // 3
        return tuple(self.subsamples[i * k:(i + 1) * k] for i in range(3))


def _check_index_seq(seq: Sequence[int], name: str) -> IndexSeq:
    out = tuple(int(i) for i in seq)
    if any(i < 0 for i in out):
        raise ValueError(f"{name} contains negative indices")
    if any(a >= b for a, b in zip(out, out[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return out


def split_working_set(s: Sequence[int]) -> tuple[IndexSeq, IndexSeq, IndexSeq, IndexSeq]:
    """Cut ``s`` into a head of ``|s| - 3*floor(|s|/4)`` items and three blocks of ``floor(|s|/4)``."""
    s = tuple(s)
    if len(s) <= 3:
        raise ValueError(f"cannot split a working set of size {len(s)} (terminal case)")
    q = len(s) // 4
    n0 = len(s) - 3 * q
    return s[:n0], s[n0:n0 + q], s[n0 + q:n0 + 2 * q], s[n0 + 2 * q:]


def _recurse(s: IndexSeq, t: IndexSeq, out: list[IndexSeq]) -> None:
    if len(s) <= 3:
        out.append(tuple(sorted(s + t)))
        return
    s0, s1, s2, s3 = split_working_set(s)
    _recurse(s0, s2 + s3 + t, out)
    _recurse(s0, s1 + s3 + t, out)
    _recurse(s0, s1 + s2 + t, out)


def build_subsamples(s: Sequence[int], t: Sequence[int] = (),
                     master_len: int | None = None) -> SubsampleFamily:
    """Run the recursive construction on working set ``s`` with carried tail ``t``.

    The returned family lists subsamples in left-to-right recursion order:
    the branch that leaves out the first block, then the second, then the
    third, each expanded depth-first.
    """
    s = _check_index_seq(s, "s")
    t = _check_index_seq(t, "t")
    if set(s) & set(t):
        raise ValueError("working set and tail must be disjoint")
    if master_len is None:
        master_len = max(s + t, default=-1) + 1
    elif any(i >= master_len for i in s + t):
        raise ValueError("index out of range for declared master length")
    out: list[IndexSeq] = []
    _recurse(s, t, out)
    return SubsampleFamily(master_len, t, tuple(out))


def subsample_count(m: int) -> int:
    if m < 0:
        raise ValueError("m must be non-negative")
    n = 1
    while m > 3:
        m -= 3 * (m // 4)
        n *= 3
    return n


def level_sizes(m: int) -> list[tuple[int, int]]:
    """Per recursion depth, the (working-set size, block size) pairs for a prefix working set of size ``m``.

    Depth ``t`` splits ``[0, n_t)`` into the head ``[0, n_{t+1})`` and three
    blocks of ``q_t`` indices each; recursion stops once ``n <= 3``.
    """
    levels = []
    while m > 3:
        q = m // 4
        levels.append((m, q))
        m -= 3 * q
    return levels


def direct_member(i: int, j: int, ell: int) -> bool:
    """Closed-form membership of master index ``i`` in subsample ``j`` when the sample has ``4**ell`` points.

    Index 0 belongs to every subsample. Otherwise take the most significant
    nonzero base-4 digit ``i_t`` of ``i``; the point is in subsample ``j``
    unless ``i_t - 1`` equals the base-3 digit ``j_t`` of ``j``.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if not 0 <= i < 4 ** ell:
        raise ValueError(f"i={i} out of range for ell={ell}")
    if not 0 <= j < 3 ** ell:
        raise ValueError(f"j={j} out of range for ell={ell}")
    if i == 0:
        return True
    t = (i.bit_length() - 1) // 2  # position of the leading base-4 digit
    return (i >> (2 * t)) - 1 != (j // 3 ** t) % 3


def enumerate_direct(ell: int,
                     member: Callable[[int, int, int], bool] = direct_member) -> SubsampleFamily:
    """Build the ``4**ell`` family purely from the membership rule ``member``."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    m = 4 ** ell
    subs = tuple(tuple(i for i in range(m) if member(i, j, ell)) for j in range(3 ** ell))
    return SubsampleFamily(m, (), subs)
