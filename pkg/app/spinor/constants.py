"""Copyright (c) 2022 VIKTOR B.V.

Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
documentation files (the "Software"), to deal in the Software without restriction, including without limitation the
rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit
persons to whom the Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all copies or substantial portions of the
Software.

VIKTOR B.V. PROVIDES THIS SOFTWARE ON AN "AS IS" BASIS, WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT
NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT
SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF
CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
import numpy as np

DEFAULT_MASS = 1.0
DEFAULT_MODE_VOLUME = 1.0

UNIT_TOLERANCE = 1e-12
UNITARITY_TOLERANCE = 1e-12
ON_SHELL_TOLERANCE = 1e-12
MOMENTUM_MATCH_TOLERANCE = 1e-12

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# spin label -> chi
SPIN_BASIS = {
    0.5: np.array([1, 0], dtype=complex),
    -0.5: np.array([0, 1], dtype=complex),
}

# pt_transform(pt_transform(psi)) == PT_INVOLUTION_SIGN * psi
PT_INVOLUTION_SIGN = -1

NAMED_GATES = {
    "identity": IDENTITY_2,
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
}
