"""
Visualização Gráfica - EdcaSim

Gráficos estáticos (PNG) opcionais do CLI (--plot):
- Atraso médio por classe em cada janela do cenário
- Atraso médio por classe em função do valor varrido
"""

import logging
import warnings
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
import seaborn as sns  # noqa: E402

from src.validacao.metricas import ORDEM_CLASSES, RunReport  # noqa: E402

logger = logging.getLogger(__name__)

warnings.filterwarnings('ignore', module='seaborn')

plt.style.use('seaborn-v0_8-darkgrid')
sns.set_palette("husl")


def _tabela_classes(relatorios: Sequence[RunReport]) -> pd.DataFrame:
    linhas = []
    for r in relatorios:
        estacoes = {w.index: w.n_stations for w in r.windows}
        for c in r.classes:
            if c.mean_delay_us is None:
                continue
            linhas.append({
                'janela': f"J{c.window} ({estacoes.get(c.window, r.n_stations)} est.)",
                'classe': c.traffic_class,
                'atraso_ms': c.mean_delay_us / 1000.0,
            })
    return pd.DataFrame(linhas, columns=['janela', 'classe', 'atraso_ms'])


def criar_grafico_atraso_janelas(relatorios: Sequence[RunReport], output_path: Path) -> Path:
    """
    Barras do atraso médio por classe e janela; com várias replicações
    a barra é a média e o traço o intervalo de confiança de 95%.
    """
    tabela = _tabela_classes(relatorios)
    fig, ax = plt.subplots(figsize=(12, 6))
    if tabela.empty:
        ax.text(0.5, 0.5, 'Nenhuma entrega registrada', ha='center', va='center', transform=ax.transAxes)
    else:
        ordem = [c for c in ORDEM_CLASSES if c in set(tabela['classe'])]
        sns.barplot(data=tabela, x='janela', y='atraso_ms', hue='classe', hue_order=ordem, errorbar=('ci', 95), ax=ax)
        ax.set_yscale('log')
        ax.legend(title='Classe', fontsize=10)
    ax.set_xlabel('Janela', fontsize=13, fontweight='bold')
    ax.set_ylabel('Atraso médio (ms)', fontsize=13, fontweight='bold')
    cenario = relatorios[0].scenario if relatorios else ''
    ax.set_title(f'Atraso médio por classe - {cenario}', fontsize=16, fontweight='bold', pad=20)

    plt.tight_layout()
    plt.savefig(output_path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    logger.info("gráfico salvo: %s", output_path)
    return Path(output_path)


def criar_grafico_varredura(tabela: pd.DataFrame, output_path: Path, titulo: str = '') -> Path:
    """Linha do atraso médio de cada classe contra o valor varrido."""
    fig, ax = plt.subplots(figsize=(12, 6))
    colunas = [c for c in tabela.columns if c.endswith('_ms')]
    for coluna in colunas:
        ax.plot(tabela['value'], tabela[coluna], marker='o', linewidth=2, label=coluna[:-3])
    parametro = tabela['parameter'].iloc[0] if 'parameter' in tabela and len(tabela) else 'valor'
    ax.set_xlabel(str(parametro), fontsize=13, fontweight='bold')
    ax.set_ylabel('Atraso médio (ms)', fontsize=13, fontweight='bold')
    ax.set_title(titulo or f'Varredura de {parametro}', fontsize=16, fontweight='bold', pad=20)
    if colunas:
        ax.legend(title='Classe', fontsize=10)
    ax.grid(axis='y', alpha=0.3, linestyle='--')

    plt.tight_layout()
    plt.savefig(output_path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    logger.info("gráfico salvo: %s", output_path)
    return Path(output_path)


__all__ = ['criar_grafico_atraso_janelas', 'criar_grafico_varredura']
