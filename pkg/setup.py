from setuptools import find_packages, setup

setup(
    name="favard_l1",
    version="0.1.0",
    description="Certified best L1 approximation of Bernoulli-type kernels and weighted "
                "algebraic approximation of Lipschitz functions.",
    packages=find_packages(exclude=["tests"]),
    package_data={"favard_l1": ["configs/*.yaml"]},
    python_requires=">=3.10",
    install_requires=[
        "numpy",
        "scipy",
        "mpmath",
        "pandas>=1.5",
        "click",
        "pyyaml",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["favard-l1=favard_l1.cli:main"]},
)
