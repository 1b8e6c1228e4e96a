"""Anonymous yet accountable contract wallet simulator.

Accountable ring signatures gate transaction execution in a simulated
account-abstraction chain; off-chain opening proofs provide
accountability.  See the module docstrings of ``group``, ``ars``,
``wallet``, ``audit``, ``harness`` and ``cli`` for the layer map.
"""

__version__ = "0.1.0"
