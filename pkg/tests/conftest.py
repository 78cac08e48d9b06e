import pytest

from helpers import log_from_variants, resource_schema, skewed_log


@pytest.fixture
def tiny_log():
    """Three cases, two variants: <a,b> twice, <a,c> once."""
    return log_from_variants([(("a", "b"), 2), (("a", "c"), 1)])


@pytest.fixture
def skewed():
    return skewed_log()


@pytest.fixture
def resource_log():
    """Two-case variant <a,b> where case 0 always uses the modal resource."""

    def attrs(case_n, event_idx):
        if case_n == 0:
            return {"resource": "r1"}
        return {"resource": "r1" if event_idx == 0 else "r2"}

    return log_from_variants(
        [(("a", "b", "c"), 2)], event_attrs=attrs, schema=resource_schema()
    )
