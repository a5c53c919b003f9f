# -*- coding: utf-8 -*-
"""Diário estruturado e exportação de resultados do EdcaSim"""
