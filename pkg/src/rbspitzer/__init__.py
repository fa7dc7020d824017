"""Exact Rota-Baxter algebra toolkit: Spitzer-type identities, Magnus expansions and Hopf-algebraic renormalization."""

__version__ = "0.1.0"
