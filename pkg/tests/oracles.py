"""Independent brute-force oracles used by the tests.

These deliberately avoid the library's own shortcut formulas: Ricci values
come from explicit frame sums over the full 6x6 curvature operator, and
sectional curvatures from explicit wedge products.
"""

import numpy as np

from curvlab.positivity import plane_components


def operator_6x6(blocks: np.ndarray) -> np.ndarray:
    """Assemble diag(R1, R2, R3) in the paired wedge basis."""
    r6 = np.zeros((6, 6))
    for i in range(3):
        r6[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blocks[i]
    return r6


def ricci_frame_sums(blocks: np.ndarray) -> np.ndarray:
    """Ric(e_a, e_b) = sum_k <R(e_a ^ e_k), e_b ^ e_k>, full 4x4 matrix."""
    r6 = operator_6x6(blocks)
    eye = np.eye(4)
    ric = np.zeros((4, 4))
    for a in range(4):
        for b in range(4):
            total = 0.0
            for k in range(4):
                if k == a or k == b:
                    continue
                pak = plane_components(eye[a], eye[k])
                pbk = plane_components(eye[b], eye[k])
                total += pak @ r6 @ pbk
            ric[a, b] = total
    return ric


def sec_of_pair(blocks: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Sectional curvature of span(x, y) for orthonormal x, y."""
    sigma = plane_components(x, y)
    return float(sigma @ operator_6x6(blocks) @ sigma)
