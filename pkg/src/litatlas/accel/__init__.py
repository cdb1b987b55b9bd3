"""Kernel backend selection.

The numba backend is used when numba imports cleanly; set LITATLAS_NUMBA=0
(or "false"/"off") to force the pure-numpy fallback. Both backends expose
the same functions and are compared by benchmarks/bench_backends.py.
"""

import os
import warnings

_flag = os.environ.get("LITATLAS_NUMBA", "").strip().lower()
_want_numba = _flag not in ("0", "false", "off")

# numba probes TBB first and warns when it is too old before falling back;
# the fallback layers are fine, so keep that probe quiet.
warnings.filterwarnings("ignore", message="The TBB threading layer requires TBB version")

USING_NUMBA = False
if _want_numba:
    try:
        from litatlas.accel import numba_backend as backend

        USING_NUMBA = True
    except ImportError:
        from litatlas.accel import numpy_backend as backend
else:
    from litatlas.accel import numpy_backend as backend

BACKEND_NAME = "numba" if USING_NUMBA else "numpy"

pairwise_sq_dists = backend.pairwise_sq_dists
csr_gram = backend.csr_gram
csr_ata = backend.csr_ata
csr_dot_dense = backend.csr_dot_dense
csr_pairwise_sq_dists = backend.csr_pairwise_sq_dists
perplexity_search = backend.perplexity_search
kmeans_assign = backend.kmeans_assign
kmeans_update = backend.kmeans_update
tsne_grad_exact = backend.tsne_grad_exact
kl_exact = backend.kl_exact
kl_sparse = backend.kl_sparse
bh_grad = backend.bh_grad
build_quadtree = backend.build_quadtree


def set_num_threads(n: int) -> None:
    """Cap worker threads for the parallel kernels (no-op on the numpy path)."""
    if USING_NUMBA:
        import numba

        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
