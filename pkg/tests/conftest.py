def pytest_configure(config):
    config.addinivalue_line("markers", "slow: finite-difference oracle checks, deselect with '-m \"not slow\"'")
