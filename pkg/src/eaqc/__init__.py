"""Entanglement-assisted quasi-cyclic quantum LDPC codes.

Construction of the code families, structural verification (girth, GF(2)
ranks, ebit counts, transversal Clifford operators), and Monte-Carlo
evaluation with binary and quaternary sum-product decoders over
depolarizing and Markovian-burst Pauli channels.
"""

from eaqc.gf2 import BinaryMatrix, ModelMatrix, expand, gfrank, matmul

__all__ = ["BinaryMatrix", "ModelMatrix", "expand", "gfrank", "matmul"]
