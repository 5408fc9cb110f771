"""Oráculo de recubrimiento: consultas directas, cubos adversarios y estimación."""
