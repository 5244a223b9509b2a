"""
Root conftest: pytest only accepts pytest_plugins at the rootdir
"""
pytest_plugins = [
    "depth2face.tests.test_tensor_core.fixtures_tensor_core",
    "depth2face.tests.test_models.fixtures_models",
    "depth2face.tests.test_data.fixtures_data",
    "depth2face.tests.test_training.fixtures_training",
    "depth2face.tests.test_metrics.fixtures_metrics",
]
