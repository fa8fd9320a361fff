"""Gnuplot scripts reproducing the three-panel experiment layout: global
curve comparison, rescaled tail overlay, and the log-log view."""

from __future__ import annotations

from pathlib import Path

_SCRIPT = """# gnuplot script generated by landscapeids for experiment "{name}"
set datafile separator ","
set terminal pngcairo size 1500,500
set output "{name}_panels.png"
set multiplot layout 1,3

set logscale x
set xlabel "E"
set ylabel "counting per site"
set title "counting functions"
plot "ids_mean.csv" skip 1 using 1:2 with steps lw 2 title "N(E)", \\
     "nu_mean.csv" skip 1 using 1:2 with steps lw 2 title "N_u(E)"

set title "rescaled tail"
plot "ids_mean.csv" skip 1 using 1:2 with steps lw 2 title "N(E)"{overlay}

set logscale y
set title "log-log view"
plot "ids_mean.csv" skip 1 using 1:($2 > 0 ? $2 : 1/0) with steps lw 2 title "N(E)", \\
     "nu_mean.csv" skip 1 using 1:($2 > 0 ? $2 : 1/0) with steps lw 2 title "N_u(E)"

unset multiplot
"""

_OVERLAY = """, \\
     "nu_scaled.csv" skip 1 using 1:2 with steps lw 2 title "c1 N_u(c2 E)\""""


def write_panel_script(out_dir, name, have_overlay=False) -> Path:
    path = Path(out_dir) / "plots.gp"
    path.write_text(_SCRIPT.format(name=name, overlay=_OVERLAY if have_overlay else ""))
    return path
