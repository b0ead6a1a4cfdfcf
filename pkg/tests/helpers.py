import numpy as np


def same_vertex_set(P, Q, tol=1e-12):
    P, Q = np.asarray(P), np.asarray(Q)
    return len(P) == len(Q) and all(np.min(np.max(np.abs(Q - p), axis=1)) <= tol for p in P)
