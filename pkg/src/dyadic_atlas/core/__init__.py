"""Infraestructura compartida: aritmética exacta, retículas, familias y configuración."""
