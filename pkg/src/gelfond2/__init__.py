"""Degree-two Gel'fond criterion: certified minimal sequences, lemma checks and the conjugate-approximation construction."""
