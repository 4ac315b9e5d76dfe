"""Hierarchical quantum memory toolkit.

Constructs LDPC and surface codes, compiles their syndrome-extraction
circuits onto bilayer 2D geometry with SWAP-network routing, propagates
Pauli faults exactly, and evaluates closed-form logical-failure-rate
models for hierarchical versus plain surface-code memories.
"""

__version__ = "0.1.0"
