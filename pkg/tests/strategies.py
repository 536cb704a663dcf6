"""Hypothesis strategies for screening decisions."""

from hypothesis import strategies as st

from slr_screen.parser import Acceptance, MethodologyKind, ScreeningDecision, map_methodology

# Single-line text without surrounding whitespace: the value space of a reply field.
_line_chars = st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp"), blacklist_characters="\x1c\x1d\x1e\x1f\x85")
line_text = st.text(_line_chars, max_size=60).map(str.strip)

methodologies = st.one_of(
    st.none(),
    st.sampled_from([k for k in MethodologyKind if k is not MethodologyKind.OTHER]).map(
        lambda k: map_methodology(k.value)
    ),
    line_text.filter(bool).map(map_methodology),
)

decisions = st.builds(
    ScreeningDecision,
    acceptance=st.sampled_from(list(Acceptance)),
    echoed_authors=line_text,
    echoed_title=line_text,
    echoed_year=st.one_of(st.none(), st.integers(min_value=-10**6, max_value=10**6)),
    methodology=methodologies,
    explanation=line_text,
)
