from setuptools import setup, find_packages

setup(
    name="plumbing-periods",
    version="0.1.0",
    description="Plumbing degenerations of nodal curves: jump-problem solver, period matrices and twisted differentials",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["examples", "examples.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    python_requires=">=3.10",
    install_requires=[
        "fastmcp>=2.0.0",  # MCP tool server
        "pydantic>=2.9.0",  # Scenario schema
        "python-dotenv>=1.0.0",  # Environment variable management
        "numpy>=1.24.0",  # Coefficient arrays, roots, sampling
        "scipy>=1.10.0",  # Binomial coefficients for pullbacks
        "networkx>=3.0",  # Dual graphs, spanning trees, cycle paths
        "click>=8.1.0",  # Command line
    ],
    extras_require={
        "dev": [
            "pytest>=7.3.1",
            "black>=23.3.0",
            "isort>=5.12.0",
            "mypy>=1.3.0",
            "flake8>=6.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "plumbing-periods=plumbing_periods.cli:main",
            "plumbing-periods-mcp=plumbing_periods.server.mcp_server:main",
        ],
    },
)
