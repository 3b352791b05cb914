"""Packaged default calibration inputs."""
