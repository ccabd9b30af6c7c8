"""
FrozenTime - Stability Certificates for Time-Varying Feedback Loops

Certifies input-output stability of discrete-time, time-varying, nonlinear
MIMO feedback loops from frozen-time snapshots of the loop function, and
simulates example loops to check the certified gain bounds empirically.

Technologies:
- NumPy / SciPy for norms, spectra and impulse responses
- pandas for plot-ready CSV traces
- Pydantic for settings and file schemas
- FastAPI for the HTTP service
- argparse CLI for scenario-driven runs
"""

__version__ = "1.0.0"
__author__ = "FrozenTime Team"
