"""Núcleo do EdcaSim: escalonador, meio, MAC DCF/EDCA, tráfego e cenários"""
from .paths import ProjectPaths

__all__ = ['ProjectPaths']
