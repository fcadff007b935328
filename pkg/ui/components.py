"""
UI Components
Component Functions Module
"""
import math
from typing import Any, Dict, List

import streamlit as st

from geometry.tube_trig import (
    MARGULIS_RADIUS,
    bending_length_constant,
    f_packing,
    g_floor,
)
from reports.bound_reports import BoundReport

TABLE_RADII = [0.25, 0.5, 1.0, MARGULIS_RADIUS, 2.0, 4.0]


def parse_lengths(text: str) -> List[float]:
    """
    Parse comma or whitespace separated axis lengths

    Raises:
        ValueError: a token is not a number
    """
    tokens = text.replace(",", " ").split()
    return [float(token) for token in tokens]


def constants_table(L0: float) -> List[Dict[str, float]]:
    """
    Rows of the f / g table

    Args:
        L0: length threshold used by g

    Returns:
        One row per radius with keys "radius", "f", "g"
    """
    return [
        {"radius": R, "f": f_packing(R), "g": g_floor(R, L0)}
        for R in TABLE_RADII
    ]


def flag_rows(report: BoundReport) -> List[Dict[str, Any]]:
    """Per-component hypothesis rows plus the global tube disjointness row."""
    rows = []
    for i, check in enumerate(report.components, 1):
        rows.append({
            "component": i,
            "length": check.length,
            "angle": check.angle,
            "tube_radius": check.tube_radius,
            "length_ok": "✅" if check.length_ok else "❌",
            "radius_ok": "✅" if check.radius_ok else "❌",
        })
    rows.append({
        "component": "all",
        "length": report.total_length,
        "angle": math.nan,
        "tube_radius": min(report.tube_radii) if report.tube_radii else math.nan,
        "length_ok": "✅" if report.flags.length_threshold else "❌",
        "radius_ok": f"disjointness {report.flags.tube_disjointness}",
    })
    return rows


def render_report_summary(report: BoundReport):
    """
    Render the headline numbers of a report

    Args:
        report: assembled BoundReport
    """
    if report.banner:
        st.warning(report.banner)
    cols = st.columns(3)
    cols[0].metric("Final bound ||Phi||_2", f"{report.final_bound:.6g}")
    cols[1].metric("c_drill", f"{report.c_drill:.6g}")
    cols[2].metric("eta", f"{report.eta:.6g}")
    if report.hypotheses_hold:
        st.success("✅ Length and tube-radius hypotheses hold")
    else:
        st.error("❌ Hypotheses not met: bound reported unverified")


def render_flags(report: BoundReport):
    """Render hypothesis flags as a table."""
    st.subheader("Hypothesis Flags")
    st.dataframe(flag_rows(report), use_container_width=True)


def render_chain(report: BoundReport):
    """Render the intermediate values of the bound."""
    st.subheader("Pipeline Chain")
    st.json(report.chain.model_dump())


def render_constants(L0: float):
    """
    Render the f / g table and the bending constant

    Args:
        L0: length threshold
    """
    st.subheader("Packing Constants")
    st.caption(f"Bending length constant 2 f(g(f(asinh sqrt 2)/2)) = {bending_length_constant(L0):.6f}")
    st.dataframe(constants_table(L0), use_container_width=True)
