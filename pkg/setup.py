from setuptools import find_packages, setup

with open("requirements.txt", encoding="utf-8") as f:
    reqs = f.read()

setup(
    name="strip-helmholtz",
    version="0.1.0",
    description="strip_helmholtz: Riemann-Hilbert solutions of the Helmholtz equation in a semi-infinite strip with membrane or plate walls",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=reqs.splitlines(),
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "strip-helmholtz = strip_helmholtz_cli.strip_helmholtz_cli:main",
        ],
    },
)
