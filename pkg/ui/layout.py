"""
UI Layout
Simple Streamlit UI Layout Module
"""
import streamlit as st

from config import DEFAULT_L0, EXAMPLE_SPECS
from ui.components import (
    render_chain,
    render_constants,
    render_flags,
    render_report_summary,
)


def render_app():
    """Render entire application (main entry)"""
    st.title("🕳️ Drilling Bound Explorer")

    with st.sidebar:
        st.header("Cone Data")
        st.text_input(
            "Axis lengths at cone angle 2π (comma separated)",
            key="lengths_text",
        )
        st.number_input("K", min_value=0.01, step=0.1, key="K")
        st.number_input("L0", min_value=0.01, max_value=0.99, step=0.05, key="L0")
        st.checkbox(
            "Use smooth-case reference K = 3/2",
            key="reference_K",
            help="Reference value only, not a rigorous constant for cone manifolds",
        )
        if st.button("Compute bound", use_container_width=True):
            st.session_state.trigger_compute = True
            st.rerun()

        st.divider()

        st.markdown("""
        **⚠️ Disclaimer:**

        Tube disjointness cannot be checked from lengths alone and is reported as assumed.
        The reference K is the Nehari constant of the smooth case.
        """)

    # Quick Start
    st.subheader("Quick Start")
    cols = st.columns(len(EXAMPLE_SPECS))
    for i, example in enumerate(EXAMPLE_SPECS):
        with cols[i]:
            if st.button(example["label"], key=f"example_{i}", use_container_width=True):
                st.session_state.pending_example = i
                st.rerun()

    st.divider()

    error = st.session_state.get("report_error")
    report = st.session_state.get("report")
    if error:
        st.error(f"❌ {error}")
    elif report is not None:
        render_report_summary(report)
        render_flags(report)
        render_chain(report)
    else:
        st.info("Enter cone data in the sidebar and compute the bound.")

    st.divider()
    render_constants(st.session_state.get("L0", DEFAULT_L0))
