"""
Configuração Padrão - EdcaSim

Carrega config/config.yaml uma única vez em SIM_CONFIG. Os dataclasses de
src/core/parametros.py leem daqui os padrões de PHY, DCF, EDCA e do harness
por caminho pontuado; um arquivo ausente ou inválido deixa valer os
padrões fixos do código.
"""

import logging
from pathlib import Path
from typing import Any, Dict

import yaml

from src.core.paths import ProjectPaths

logger = logging.getLogger(__name__)

CONFIG_FILE = ProjectPaths.YAML_CONFIG
SIM_CONFIG: Dict[str, Any] = {}


def load_config(arquivo: Path = CONFIG_FILE) -> Dict[str, Any]:
    global SIM_CONFIG
    try:
        with open(arquivo, 'r', encoding='utf-8') as f:
            dados = yaml.safe_load(f)
    except FileNotFoundError:
        logger.warning("config.yaml não encontrado em %s; usando padrões fixos", arquivo)
        dados = None
    except yaml.YAMLError as e:
        logger.error("config.yaml inválido (%s); usando padrões fixos", e)
        dados = None
    SIM_CONFIG = dados if isinstance(dados, dict) else {}
    return SIM_CONFIG


def obter(caminho: str, padrao):
    """Valor de SIM_CONFIG em 'secao.chave' ('phy.sifs_us'), ou o padrão."""
    valor: Any = SIM_CONFIG
    for chave in caminho.split('.'):
        if not isinstance(valor, dict) or chave not in valor:
            return padrao
        valor = valor[chave]
    return valor


load_config()

__all__ = ['CONFIG_FILE', 'SIM_CONFIG', 'load_config', 'obter']
