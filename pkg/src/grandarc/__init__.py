"""Grand arc graph toolkit.

Computations for arc graphs attached to infinite-type surfaces, carried out
on finite-type truncations: end-space classification, exact arc calculus on
labeled ideal triangulations, unicorn paths, explicit graph builds with
distance and hyperbolicity estimates, and twist-word dynamics experiments.
"""

__version__ = "0.1.0"
