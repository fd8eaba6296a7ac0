import pytest

from ordstat._backend import active_backend, available_backends, set_backend


@pytest.fixture(params=available_backends())
def backend(request):
    """Run the decorated test once per available kernel backend."""
    previous = active_backend()
    set_backend(request.param)
    yield request.param
    set_backend(previous)
