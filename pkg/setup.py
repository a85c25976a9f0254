from setuptools import setup, find_namespace_packages

setup(
    name="cremjax",
    url="https://github.com/cremjax/cremjax",

    packages=find_namespace_packages(include=["cremjax*"]),
    install_requires=[
        "jax",
        "flax==0.8.3",
        "numpy",
        "scipy",
        "pandas",
        "joblib",
        "omegaconf",
        "hydra-core",
        "tensorboardX",
        "tqdm",
    ],

    version="0.1",
    license="GNU",
    description="A numerical laboratory for the complex Random Energy Model in JAX.",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
)
