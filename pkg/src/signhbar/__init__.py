"""Signed-hbar canonical quantization and antiunitary transformations.

Flipping the sign of hbar is equivalent to transforming states and
observables by an antiunitary operator; this package turns that statement
into executable, tolerance-checked identities.
"""

__version__ = "0.1.0"
