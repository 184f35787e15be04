"""Compiled inner loop of the lazy greedy selection.

The heap holds keys ordered by (score descending, key ascending); a key is
a candidate's position in tie-break order. A stale entry (its stamp
predates the latest count update) is re-scored in place before it may be
accepted.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _before(sa, ka, sb, kb):
    return sa > sb or (sa == sb and ka < kb)


@njit(cache=True)
def _sift_down(hs, hk, size, pos):
    s, k = hs[pos], hk[pos]
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _before(hs[right], hk[right], hs[child], hk[child]):
            child = right
        if _before(hs[child], hk[child], s, k):
            hs[pos], hk[pos] = hs[child], hk[child]
            pos = child
        else:
            break
    hs[pos], hk[pos] = s, k


@njit(cache=True)
def _score(flat, start, end, weights, length, factor):
    total = 0.0
    for j in range(start, end):
        total += weights[flat[j]]
    return total / length * factor


@njit(cache=True)
def greedy_kernel(
    flat, offs, upd_flat, upd_offs, lengths, group_tok, group_factor,
    members, member_offs, key_group, order, cand_target,
    heap_score, heap_key, n_grams, half, budget, exclusive, decay, n_targets,
):
    """Run the selection; returns (candidate indices, scores) in selection order.

    Candidates whose scores can never differ (same source n-grams, length
    and factor) share a group. ``members[member_offs[g]:member_offs[g+1]]``
    lists group ``g``'s keys in ascending order and the heap carries one
    entry per live group, keyed by its first unused member, so the group
    is scored once per count update instead of once per member.

    ``flat``/``offs`` list the seed n-gram ids each distinct sentence scores
    on (indexed by ``group_tok``), ``upd_flat``/``upd_offs`` the ids added
    to the counts when it is picked. ``heap_score``/``heap_key`` hold the
    initial entries, already heap-ordered. ``half[c]`` is the weight of an
    n-gram seen ``c`` times; counts at or past ``len(half) - 1`` use the
    final entry.
    """
    size = heap_score.shape[0]
    cap = half.shape[0] - 1
    counts = np.zeros(n_grams, dtype=np.int64)
    weights = np.ones(n_grams, dtype=np.float64)
    n_groups = group_tok.shape[0]
    stamps = np.zeros(n_groups, dtype=np.int64)
    nxt = member_offs[:-1].copy()
    taken = np.zeros(n_targets if exclusive else 0, dtype=np.bool_)
    m = min(budget, members.shape[0])
    out_c = np.empty(m, dtype=np.int64)
    out_s = np.empty(m, dtype=np.float64)
    n_out = 0
    version = 0
    while size > 0 and n_out < budget:
        key = heap_key[0]
        g = key_group[key]
        c = order[key]
        if exclusive and taken[cand_target[c]]:
            nxt[g] += 1
            if nxt[g] < member_offs[g + 1]:
                heap_key[0] = members[nxt[g]]
            else:
                size -= 1
                heap_score[0], heap_key[0] = heap_score[size], heap_key[size]
            _sift_down(heap_score, heap_key, size, 0)
            continue
        if decay and stamps[g] != version:
            t = group_tok[g]
            s = _score(flat, offs[t], offs[t + 1], weights, lengths[t], group_factor[g])
            stamps[g] = version
            if s <= 0.0:
                size -= 1
                heap_score[0], heap_key[0] = heap_score[size], heap_key[size]
                _sift_down(heap_score, heap_key, size, 0)
                continue
            heap_score[0] = s
            _sift_down(heap_score, heap_key, size, 0)
            if heap_key[0] != key:
                continue
        out_c[n_out] = c
        out_s[n_out] = heap_score[0]
        n_out += 1
        nxt[g] += 1
        if nxt[g] < member_offs[g + 1]:
            heap_key[0] = members[nxt[g]]
        else:
            size -= 1
            heap_score[0], heap_key[0] = heap_score[size], heap_key[size]
        _sift_down(heap_score, heap_key, size, 0)
        if decay:
            t = group_tok[g]
            for j in range(upd_offs[t], upd_offs[t + 1]):
                u = upd_flat[j]
                counts[u] += 1
                weights[u] = half[min(counts[u], cap)]
            version += 1
        if exclusive:
            taken[cand_target[c]] = True
    return out_c[:n_out], out_s[:n_out]


@njit(cache=True)
def heapify(hs, hk):
    for pos in range(hs.shape[0] // 2 - 1, -1, -1):
        _sift_down(hs, hk, hs.shape[0], pos)
