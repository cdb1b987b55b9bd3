"""Array-based quadtree for Barnes-Hut force approximation.

Written against plain numpy arrays with scalar loops so the numba backend
can compile it unchanged; the numpy backend runs it as-is (tree build is
O(n * depth) and cheap next to the force evaluation).

Node layout (parallel arrays): centers/half describe the square cell,
children holds 4 child ids or -1 for leaves, count is the number of points
in the subtree, com the center of mass. leaf_point is the first point
stored in a leaf (-1 for internal nodes); point_leaf maps each point to its
leaf so traversals can exclude self-interaction. Cells at max_depth become
buckets that keep accumulating coincident points instead of splitting.
"""

import numpy as np

MAX_DEPTH = 48


def build_quadtree(Y, max_depth):
    n = Y.shape[0]
    xmin = Y[:, 0].min()
    xmax = Y[:, 0].max()
    ymin = Y[:, 1].min()
    ymax = Y[:, 1].max()
    cx = 0.5 * (xmin + xmax)
    cy = 0.5 * (ymin + ymax)
    h = 0.5 * max(xmax - xmin, ymax - ymin)
    h = h * 1.00001 + 1e-12

    cap = 4 * n + 64
    centers = np.zeros((cap, 2))
    half = np.zeros(cap)
    children = np.full((cap, 4), -1, np.int64)
    count = np.zeros(cap, np.int64)
    com = np.zeros((cap, 2))
    leaf_point = np.full(cap, -1, np.int64)
    point_leaf = np.full(n, -1, np.int64)

    centers[0, 0] = cx
    centers[0, 1] = cy
    half[0] = h
    n_nodes = 1

    for p in range(n):
        px = Y[p, 0]
        py = Y[p, 1]
        node = 0
        depth = 0
        while True:
            count[node] += 1
            com[node, 0] += px
            com[node, 1] += py
            if depth >= max_depth:
                if leaf_point[node] == -1:
                    leaf_point[node] = p
                point_leaf[p] = node
                break
            if children[node, 0] == -1:
                if count[node] == 1:
                    leaf_point[node] = p
                    point_leaf[p] = node
                    break
                # occupied leaf: split, push the resident point one level down
                if n_nodes + 4 > cap:
                    new_cap = cap * 2
                    centers2 = np.zeros((new_cap, 2))
                    centers2[:cap] = centers
                    centers = centers2
                    half2 = np.zeros(new_cap)
                    half2[:cap] = half
                    half = half2
                    children2 = np.full((new_cap, 4), -1, np.int64)
                    children2[:cap] = children
                    children = children2
                    count2 = np.zeros(new_cap, np.int64)
                    count2[:cap] = count
                    count = count2
                    com2 = np.zeros((new_cap, 2))
                    com2[:cap] = com
                    com = com2
                    leaf_point2 = np.full(new_cap, -1, np.int64)
                    leaf_point2[:cap] = leaf_point
                    leaf_point = leaf_point2
                    cap = new_cap
                base = n_nodes
                n_nodes += 4
                hh = 0.5 * half[node]
                for c in range(4):
                    idx = base + c
                    centers[idx, 0] = centers[node, 0] + (hh if (c & 1) else -hh)
                    centers[idx, 1] = centers[node, 1] + (hh if (c & 2) else -hh)
                    half[idx] = hh
                    children[node, c] = idx
                q = leaf_point[node]
                leaf_point[node] = -1
                qc = (1 if Y[q, 0] >= centers[node, 0] else 0) + (
                    2 if Y[q, 1] >= centers[node, 1] else 0
                )
                qnode = children[node, qc]
                count[qnode] = 1
                com[qnode, 0] = Y[q, 0]
                com[qnode, 1] = Y[q, 1]
                leaf_point[qnode] = q
                point_leaf[q] = qnode
            c = (1 if px >= centers[node, 0] else 0) + (2 if py >= centers[node, 1] else 0)
            node = children[node, c]
            depth += 1

    for m in range(n_nodes):
        if count[m] > 0:
            com[m, 0] /= count[m]
            com[m, 1] /= count[m]

    return (
        centers[:n_nodes],
        half[:n_nodes],
        children[:n_nodes],
        count[:n_nodes],
        com[:n_nodes],
        leaf_point[:n_nodes],
        point_leaf,
    )
