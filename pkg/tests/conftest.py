import pytest

from dqspec import corpus


@pytest.fixture(scope="session")
def licences_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("licences")
    plan = corpus.licences_plan()
    result = corpus.generate(plan, out)
    return plan, result


@pytest.fixture(scope="session")
def register_corpus(tmp_path_factory):
    """Full-size register reconstruction; generated once per session."""
    out = tmp_path_factory.mktemp("register")
    plan = corpus.register_plan()
    result = corpus.generate(plan, out)
    return plan, result


@pytest.fixture(scope="session")
def small_register_corpus(tmp_path_factory):
    """Scaled-down register corpus for fast integration tests."""
    import dataclasses

    out = tmp_path_factory.mktemp("register_small")
    plan = corpus.register_plan(records=6000, seed=99)
    plan = dataclasses.replace(
        plan,
        injections=tuple(
            dataclasses.replace(i, count=max(1, i.count // 80)) for i in plan.injections
        ),
    )
    result = corpus.generate(plan, out)
    return plan, result
