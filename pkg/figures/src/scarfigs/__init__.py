"""Figure scripts for the scarcircuit CSV outputs.

Each ``fig_*`` module renders one panel family from the published CSV
schemas (no linkage to the simulator internals) and writes both PNG and
SVG.  Rendering is a pure function of the input files: fixed fonts, fixed
DPI, no timestamps embedded.
"""

__version__ = "0.1.0"
