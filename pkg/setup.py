from setuptools import find_packages, setup

setup(
    name="pattern-complexity-toolkit",
    version="1.0.0",
    description="Exact pattern complexity, annihilators, periodic decompositions and cluster tilings",
    author="Aniket Poojari",
    packages=find_packages(exclude=["tests", "examples"]),
    python_requires=">=3.10",
    install_requires=[
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "pyyaml>=6.0",
        "sympy>=1.12",
        "fastapi>=0.115.0",
        "uvicorn>=0.30.0",
        "matplotlib>=3.9.0",
        "numpy>=1.26.0",
    ],
    entry_points={
        "console_scripts": [
            "pattern-toolkit=cli.commands:main",
        ],
    },
)
