import pytest

from icsched import dp


def backends():
    return dp.available_backends()


@pytest.fixture(params=dp.available_backends())
def backend(request):
    return request.param
