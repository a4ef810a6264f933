"""Micro-Doppler MIMO radar laboratory.

Synthesizes radar echoes of a walking pedestrian seen by a colocated-MIMO
automotive radar, extracts sparse-dictionary energy-signature features, and
estimates the direction of motion by supervised regression.
"""

__version__ = "0.1.0"
