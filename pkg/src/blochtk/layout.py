"""Canonical real-vector layout of the density matrix.

The state of an N-level system is stored as a real vector of length N*N:
slots 0..N-1 hold the populations rho_ii (level index order), followed by
one (Re, Im) slot pair per independent coherence sigma_ij, i < j, in
row-major upper-triangle order. The emitted C solvers index the same layout
1-based through ``pop[]``.
"""
from __future__ import annotations


def state_len(n: int) -> int:
    return n * n


def coherence_pairs(n: int) -> list[tuple[int, int]]:
    """Independent coherence pairs (i, j), i < j, row-major order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def pair_position(n: int, i: int, j: int) -> int:
    """Position of pair (i, j) in the row-major upper-triangle ordering."""
    if not (1 <= i < j <= n):
        raise ValueError(f"not an upper-triangle pair: ({i}, {j})")
    # pairs (1,2)..(1,n) come first, then (2,3)..(2,n), ...
    before = (i - 1) * n - (i - 1) * i // 2
    return before + (j - i - 1)


def pop_slot(i: int) -> int:
    """0-based slot of population rho_ii (level indices are 1-based)."""
    return i - 1


def re_slot(n: int, i: int, j: int) -> int:
    return n + 2 * pair_position(n, i, j)


def im_slot(n: int, i: int, j: int) -> int:
    return n + 2 * pair_position(n, i, j) + 1


def observable_columns(n: int, elements) -> list[tuple[str, int]]:
    """Column (name, slot) pairs for a list of (i, j) element ids.

    Populations give one ``rho_i_i`` column; coherences expand to
    ``re_sigma_i_j`` and ``im_sigma_i_j``.
    """
    cols: list[tuple[str, int]] = []
    for (i, j) in elements:
        if i == j:
            cols.append((f"rho_{i}_{i}", pop_slot(i)))
        else:
            cols.append((f"re_sigma_{i}_{j}", re_slot(n, i, j)))
            cols.append((f"im_sigma_{i}_{j}", im_slot(n, i, j)))
    return cols
