"""
This module wires the shared runtime services of the package: the parsed YAML configuration, the
logger, the default quadrature settings and the thread pool used for parallel panel evaluation.

The module leverages the dependency_injector package so that services such as the logger or the
executor are created once and reused by every numerical routine and by the command line.

Functions:
    provide_logger() -> Logger: Configures and returns the package logger (stderr, timestamped).
    provide_quadrature() -> QuadratureSpec: Builds the default quadrature settings from the config.
    provide_executor() -> ThreadPoolExecutor: Creates the pool used by ``scipy.integrate.quad_vec``.

Classes:
    Container: A dependency injection container exposing ``config``, ``logger``, ``quadrature`` and ``executor``.

Usage:
    ``Container.logger().info(msg=...)`` and ``Container.quadrature()`` may be called from anywhere.
    Set ``MU_BARGMANN_CONFIG`` to point at an alternative YAML file before importing the package.
"""

import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from logging import Logger

from dependency_injector import containers, providers

import mu_bargmann.common.common as common
from mu_bargmann.constants import CONFIG_ENV_VAR, CONFIG_YAML_FILE
from mu_bargmann.model import QuadratureSpec


def provide_logger() -> Logger:
    stderr_handler = logging.StreamHandler(stream=sys.stderr)
    logging.basicConfig(
        level=Container.config.get("log_level", "INFO"),
        handlers=[stderr_handler],
        format="%(asctime)s: %(levelname)s: %(message)s",
    )
    return logging.getLogger("mu_bargmann")


def provide_quadrature() -> QuadratureSpec:
    """
    Builds the default quadrature settings from the ``quadrature`` block of the YAML configuration.

    Returns:
        QuadratureSpec: Frozen settings; missing keys fall back to the model defaults.
    """
    return QuadratureSpec.from_mapping(Container.config.get("quadrature", {}))


def provide_executor() -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=Container.config.get("max_workers", 4), thread_name_prefix="quadrature")


class Container(containers.DeclarativeContainer):
    """
    Dependency injection container that provides singletons for the application.

    Attributes:
        config (dict): Configuration loaded from ``MU_BARGMANN_CONFIG`` or the packaged ``config.yaml``.
        logger (Provider): Provides a logger writing to stderr so that stdout carries only report data.
        quadrature (Provider): Provides the default ``QuadratureSpec``.
        executor (Provider): Provides the thread pool used when ``quadrature_workers`` exceeds one.
    """

    config = common.load_yaml(os.environ.get(CONFIG_ENV_VAR, CONFIG_YAML_FILE))

    logger = providers.Singleton(provide_logger)
    quadrature = providers.Singleton(provide_quadrature)
    executor = providers.Singleton(provide_executor)
