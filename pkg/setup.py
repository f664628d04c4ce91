from setuptools import setup
from setuptools import find_packages
from os.path import join, dirname

with open(join(dirname(__file__), "kinkpanel/VERSION")) as f:
    version = f.read().strip()

try:
    # obtain long description from README
    readme_path = join(dirname(__file__), "README.rst")
    with open(readme_path, encoding="utf-8") as f:
        README = f.read()
except IOError:
    README = ""


install_requires = [
    "numpy>=1.17",
    "scipy>=1.4",
    "pandas>=2.0",
    "typing-extensions>=3.7.4.1",
]
tests_require = ["pytest>=5.3.5", "pytest-cov>=2.8.1"]

setup(
    name="kinkpanel",
    version=version,
    description="KinkPanel builds DAO governance panels from proposal and vote records and estimates two-way fixed-effects kink regressions with data-driven cutoffs, clustered inference and a DAO cluster bootstrap.",
    long_description=README,
    long_description_content_type="text/x-rst",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="panel data, fixed effects, kink regression, cluster bootstrap, DAO governance",
    license="MIT License",
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={"kinkpanel": ["VERSION"]},
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=install_requires,
    extras_require={"testing": tests_require},
    entry_points={"console_scripts": ["kinkpanel=kinkpanel.cli:run"]},
)
