import pytest

from jointblup import build_moment_set, exponential_model, normal_model


@pytest.fixture(scope="session")
def moments_for():
    """Memoized moment sets shared across the whole test session."""
    cache = {}

    def get(family: str, n: int):
        key = (family, n)
        if key not in cache:
            model = normal_model() if family == "normal" else exponential_model()
            cache[key] = build_moment_set(model, n)
        return cache[key]

    return get


@pytest.fixture()
def schmee_hahn():
    from jointblup.reference import schmee_hahn_sample

    return schmee_hahn_sample()
