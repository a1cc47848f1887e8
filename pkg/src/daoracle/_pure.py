"""Pure-Python hot kernels.

These are the reference implementations of the two search loops that
dominate runtime: the branch-and-bound stopping-set enumeration and the
alternating-path DFS used during graph construction. The compiled
extension (daoracle._speedups) mirrors them statement for statement:
identical traversal order, identical budget accounting, identical
output, so either backend can be substituted for the other.
"""

from __future__ import annotations


def find_stopping_sets(vn_adj, cn_adj, bound, budget, minimal_only=False):
    """Enumerate stopping sets of size < bound by branch and bound.

    vn_adj / cn_adj are sequences of ascending index tuples. A check node
    with exactly one included neighbour forces another neighbour in (unit
    propagation) or, with no undecided neighbour left, kills the branch.
    The additions lower bound ceil(unsat / max_vn_degree) prunes by size.

    Returns (sets, expansions, exhausted): sets in traversal order as
    sorted tuples, exhausted False when the expansion budget ran out
    (the list is then a correct partial enumeration).

    With minimal_only, branches below a recorded set are not extended;
    all support-minimal sets are still found (no minimal set extends
    another stopping set), but the output may keep some non-minimal ones
    found on other branches, so callers filter afterwards.
    """
    n = len(vn_adj)
    m = len(cn_adj)
    max_take = bound - 1
    if max_take < 1 or n == 0:
        return [], 0, True
    maxdeg = 1
    for adj in vn_adj:
        if len(adj) > maxdeg:
            maxdeg = len(adj)

    state = [0] * n  # 0 undecided, 1 in, 2 out
    cn_in = [0] * m
    cn_free = [len(adj) for adj in cn_adj]
    in_list = []
    found = []
    unsat = 0  # CNs with exactly one included neighbour
    dead = 0   # unsat CNs with no undecided neighbour left
    expansions = 0

    def include(v):
        nonlocal unsat, dead
        state[v] = 1
        in_list.append(v)
        for c in vn_adj[v]:
            free0 = cn_free[c]
            in0 = cn_in[c]
            cn_free[c] = free0 - 1
            cn_in[c] = in0 + 1
            if in0 == 0:
                unsat += 1
                if free0 == 1:
                    dead += 1
            elif in0 == 1:
                unsat -= 1

    def undo_include(v):
        nonlocal unsat, dead
        state[v] = 0
        in_list.pop()
        for c in vn_adj[v]:
            in1 = cn_in[c]
            cn_in[c] = in1 - 1
            cn_free[c] += 1
            if in1 == 1:
                unsat -= 1
                if cn_free[c] == 1:
                    dead -= 1
            elif in1 == 2:
                unsat += 1

    def exclude(v):
        nonlocal dead
        state[v] = 2
        for c in vn_adj[v]:
            cn_free[c] -= 1
            if cn_in[c] == 1 and cn_free[c] == 0:
                dead += 1

    def undo_exclude(v):
        nonlocal dead
        state[v] = 0
        for c in vn_adj[v]:
            if cn_in[c] == 1 and cn_free[c] == 0:
                dead -= 1
            cn_free[c] += 1

    def branch_over(candidates):
        # include/exclude sweep; partitions completions without duplicates
        aborted = False
        excluded = []
        for u in candidates:
            if state[u] != 0:
                continue
            include(u)
            if not search():
                aborted = True
            undo_include(u)
            if aborted:
                break
            exclude(u)
            excluded.append(u)
        for u in reversed(excluded):
            undo_exclude(u)
        return not aborted

    def search():
        # entered immediately after an inclusion; returns False on abort
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            return False
        forced = []
        viable = True
        while True:
            if dead:
                viable = False
                break
            if len(in_list) + (unsat + maxdeg - 1) // maxdeg > max_take:
                viable = False
                break
            unit_v = -1
            if unsat:
                for c in range(m):
                    if cn_in[c] == 1 and cn_free[c] == 1:
                        for u in cn_adj[c]:
                            if state[u] == 0:
                                unit_v = u
                                break
                        break
            if unit_v < 0:
                break
            include(unit_v)
            forced.append(unit_v)
        ok = True
        if viable:
            deepen = True
            if unsat == 0:
                found.append(tuple(sorted(in_list)))
                if minimal_only:
                    deepen = False
            if deepen and len(in_list) < max_take:
                if unsat:
                    best_c = -1
                    best_free = 1 << 30
                    for c in range(m):
                        if cn_in[c] == 1 and cn_free[c] < best_free:
                            best_c = c
                            best_free = cn_free[c]
                    ok = branch_over(list(cn_adj[best_c]))
                else:
                    ok = branch_over(range(n))
        for v in reversed(forced):
            undo_include(v)
        return ok

    exhausted = branch_over(range(n))
    return found, expansions, exhausted


def alternating_paths(vn_adj, cn_adj, start, length_edges, cap):
    """Simple alternating paths with exactly length_edges edges from a VN.

    length_edges must be odd, so paths end at a check node; vns[0] is
    start and cns[-1] the terminal CN. Emission follows DFS order over
    the (ascending) adjacency, truncated past `cap` paths.

    Returns (paths, truncated) with paths a list of (vns, cns) tuples.
    """
    if length_edges % 2 != 1 or length_edges < 1:
        raise ValueError("length_edges must be odd and positive")
    n = len(vn_adj)
    m = len(cn_adj)
    vseen = [False] * n
    cseen = [False] * m
    path_v = [start]
    path_c = []
    out = []
    truncated = False
    vseen[start] = True

    def dfs(v, remaining):
        nonlocal truncated
        for c in vn_adj[v]:
            if truncated:
                return
            if cseen[c]:
                continue
            cseen[c] = True
            path_c.append(c)
            if remaining == 1:
                if len(out) < cap:
                    out.append((tuple(path_v), tuple(path_c)))
                else:
                    truncated = True
            else:
                for u in cn_adj[c]:
                    if truncated:
                        break
                    if vseen[u]:
                        continue
                    vseen[u] = True
                    path_v.append(u)
                    dfs(u, remaining - 2)
                    path_v.pop()
                    vseen[u] = False
            path_c.pop()
            cseen[c] = False

    dfs(start, length_edges)
    vseen[start] = False
    return out, truncated
