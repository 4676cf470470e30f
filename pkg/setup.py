from setuptools import setup, find_packages
from pkg_resources import parse_requirements

def get_requirements(filename):
    with open(filename) as f:
        requirements = [str(req) for req in parse_requirements(f)]
    return requirements

setup(
    name="mu_bargmann",
    version="0.1.0",
    packages=find_packages(include=["mu_bargmann", "mu_bargmann.*"]),
    package_data={"mu_bargmann": ["config.yaml"]},
    install_requires=get_requirements("requirements.txt"),
    entry_points={"console_scripts": ["mu-bargmann=mu_bargmann.cli:main"]},
    description="Numerical toolkit for the mu-deformed Segal-Bargmann transform and its inequalities",
    long_description=open("README.md").read(),
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache 2.0 License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
