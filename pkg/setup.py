import os

from setuptools import find_packages, setup

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, "backend", "requirements.txt")) as handle:
    requirements = [
        line.strip()
        for line in handle
        if line.strip() and not line.startswith("#")
        and not line.startswith(("pytest", "black", "isort", "flake8", "mypy"))
    ]

setup(
    name="cyclebound",
    version="1.0.0",
    description="Exact verifier for the heaviest-cycle local sum bound on weighted graphs",
    license="MIT",
    package_dir={"": "backend"},
    packages=find_packages(where="backend", exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": ["pytest==8.3.3", "pytest-cov==5.0.0", "black==24.10.0", "isort==5.13.2",
                "flake8==7.1.1", "mypy==1.12.1"],
    },
    entry_points={"console_scripts": ["cyclebound = app.main:main"]},
)
