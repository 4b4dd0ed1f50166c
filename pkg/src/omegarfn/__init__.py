"""Executable desk-scale toolkit for ordinal analysis of reflection principles.

Modules: ``ordinal`` (notations below epsilon_0), ``syntax`` (two-sorted
formulas and Goedel coding), ``schemas`` (schema builders), ``calculus``
(finitary Tait calculus and checker), ``omega`` (coded omega-proofs and cut
elimination), ``truth`` (three-valued evaluation), ``synth`` (proof
synthesizers and Xi-audits) and ``cli``.
"""
__version__ = "0.1.0"
