"""Exact computations in the Bruhat-Tits building of SL_3(Q(t)) for the ping-pong
argument showing that f^m and k^n (m, n >= 3) generate a free group.

Modules, from the bottom up:

- ``exactfield``: the field k0(t) with the valuation at infinity and a parser
- ``matlin``: 3x3 matrices, the affine Weyl group, Iwahori factorizations
- ``building``: vertices, chambers, frames, sectors and distances
- ``retractions``: Weyl distances, retractions and projections
- ``burau``: the named matrices f, k, s and the frames through both axes
- ``pingpong``: the ping-pong sets, campaigns and certificates
- ``kernels``: dense mod-q Laurent products used for bulk word checks
- ``render`` and ``cli``: figures and the command-line front end
"""

from .building import Chamber, Frame, Vertex
from .burau import GroupWord, builtin, evaluate_word
from .exactfield import GF, QQ, RatFunc, parse_expr
from .matlin import AffineWeylElt, Mat
from .pingpong import Certificate, SampleSpec

__version__ = "0.1.0"

__all__ = [
    "AffineWeylElt",
    "Certificate",
    "Chamber",
    "Frame",
    "GF",
    "GroupWord",
    "Mat",
    "QQ",
    "RatFunc",
    "SampleSpec",
    "Vertex",
    "builtin",
    "evaluate_word",
    "parse_expr",
]
