"""Rovibrational structure, transition strengths and spectral line models
for ultracold heteronuclear diatomic molecules."""

__version__ = "0.1.0"
