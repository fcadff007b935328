"""
Drilling Bound Explorer
Streamlit Web UI - Main Entry File
"""
import streamlit as st
from pydantic import ValidationError

from config import DEFAULT_L0, EXAMPLE_SPECS, SMOOTH_NEHARI_K
from reports.bound_reports import ConeLocusSpec, assemble_report
from ui.components import parse_lengths
from ui.layout import render_app

# =========================================================
# Page config (ONLY here)
# =========================================================
st.set_page_config(
    page_title="Drilling Bound Explorer",
    layout="wide",
    initial_sidebar_state="expanded",
)

# =========================================================
# Session State Initialization (STRICT keys)
# =========================================================
def init_session_state():
    st.session_state.setdefault("lengths_text", "0.01")
    st.session_state.setdefault("K", SMOOTH_NEHARI_K)
    st.session_state.setdefault("L0", DEFAULT_L0)
    st.session_state.setdefault("reference_K", True)
    st.session_state.setdefault("report", None)
    st.session_state.setdefault("report_error", "")
    st.session_state.setdefault("trigger_compute", False)
    st.session_state.setdefault("pending_example", None)


# =========================================================
# Bound Handler (CALL ONLY, no side effects elsewhere)
# =========================================================
def handle_bound_request():
    try:
        lengths = parse_lengths(st.session_state.lengths_text)
        reference = bool(st.session_state.reference_K)
        spec = ConeLocusSpec(
            components=[{"length": L} for L in lengths],
            K=SMOOTH_NEHARI_K if reference else st.session_state.K,
            L0=st.session_state.L0,
            reference_K=reference,
        )
        st.session_state.report = assemble_report(spec)
        st.session_state.report_error = ""
    except (ValidationError, ValueError, RuntimeError) as e:
        st.session_state.report = None
        st.session_state.report_error = str(e)


# =========================================================
# App Entry
# =========================================================
init_session_state()

# Apply a quick-start example before the sidebar widgets are created
if st.session_state.get("pending_example") is not None:
    example = EXAMPLE_SPECS[st.session_state.pending_example]
    st.session_state.pending_example = None
    st.session_state.lengths_text = ", ".join(str(L) for L in example["lengths"])
    st.session_state.K = example["K"]
    st.session_state.L0 = example["L0"]
    st.session_state.reference_K = example["K"] == SMOOTH_NEHARI_K
    st.session_state.trigger_compute = True

if st.session_state.get("trigger_compute", False):
    st.session_state.trigger_compute = False
    with st.spinner("🔍 Assembling drilling bound..."):
        handle_bound_request()

# Render UI (ALL UI lives in ui/layout.py)
render_app()
