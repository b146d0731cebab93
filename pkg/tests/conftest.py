from __future__ import annotations

from fractions import Fraction

from hypothesis import settings, strategies as st

from sigforge.cyclo import CyclotomicNumber, euler_phi

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CONDUCTORS = (1, 2, 3, 4, 5, 6, 8, 12, 16)


@st.composite
def cyclotomics(draw, conductors=CONDUCTORS, bound: int = 6) -> CyclotomicNumber:
    m = draw(st.sampled_from(conductors))
    coeffs = draw(
        st.lists(
            st.fractions(min_value=-bound, max_value=bound, max_denominator=4),
            min_size=euler_phi(m),
            max_size=euler_phi(m),
        )
    )
    return CyclotomicNumber(m, coeffs)


small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def frac(x) -> Fraction:
    return Fraction(x)


# -- acceptance report -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {number:>2} {status}  {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
