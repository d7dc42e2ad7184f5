from setuptools import setup, find_packages

setup(
    name='copacrr',
    version='0.1.0',
    description="Copacrr is a python library used to train and evaluate the Co-PACRR neural re-ranking model.",
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    install_requires=[
        'numpy', # for every array computation, from the similarity matrices to the gradients.
    ],
    entry_points={
        'console_scripts': [
            'copacrr=copacrr.commands.cli:cli'
        ],
    },
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Topic :: Text Processing :: Indexing"
    ],
    python_requires='>=3.10',
)
