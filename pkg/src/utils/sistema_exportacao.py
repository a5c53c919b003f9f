"""
Sistema de Exportação - EdcaSim

Grava os RunReports de uma execução em CSV (uma linha por fluxo, janela
e replicação) ou JSON (relatórios completos). Também grava o agregado
entre replicações e a tabela de varreduras.

Os nomes de arquivo dependem só do cenário e da semente, então a mesma
execução reescreve os mesmos bytes.
"""

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from src.validacao.metricas import RunReport

logger = logging.getLogger(__name__)

FORMATOS = ('csv', 'json')

COLUNAS_CSV = [
    'scenario', 'rep', 'seed', 'n_stations', 'window', 'flow_id', 'class',
    'delivered', 'dropped', 'mean_delay_ms', 'p50_ms', 'p95_ms', 'max_ms', 'throughput_bps',
]


def _ms(valor_us: Optional[float]) -> Optional[float]:
    return None if valor_us is None else valor_us / 1000.0


def _nome_base(relatorios: Sequence[RunReport]) -> str:
    primeiro = relatorios[0]
    return f"{primeiro.scenario}_seed{primeiro.seed}"


class SistemaExportacao:
    """Exporta relatórios para um diretório de saída."""

    def __init__(self, destino: Path):
        self.destino = Path(destino)

    def _preparar(self, nome: str) -> Path:
        self.destino.mkdir(parents=True, exist_ok=True)
        return self.destino / nome

    # ------------------------------------------------------------------
    # Tabelas
    # ------------------------------------------------------------------

    @staticmethod
    def tabela_fluxos(relatorios: Sequence[RunReport]) -> pd.DataFrame:
        linhas: List[Dict[str, Any]] = []
        for r in relatorios:
            estacoes = {w.index: w.n_stations for w in r.windows}
            for f in r.flows:
                linhas.append({
                    'scenario': r.scenario,
                    'rep': r.rep,
                    'seed': r.seed,
                    'n_stations': estacoes.get(f.window, r.n_stations),
                    'window': f.window,
                    'flow_id': f.flow_id,
                    'class': f.traffic_class,
                    'delivered': f.delivered,
                    'dropped': f.dropped,
                    'mean_delay_ms': _ms(f.mean_delay_us),
                    'p50_ms': _ms(f.p50_us),
                    'p95_ms': _ms(f.p95_us),
                    'max_ms': _ms(f.max_us),
                    'throughput_bps': f.throughput_bps,
                })
        return pd.DataFrame(linhas, columns=COLUNAS_CSV)

    # ------------------------------------------------------------------
    # Escrita
    # ------------------------------------------------------------------

    def exportar_csv(self, relatorios: Sequence[RunReport]) -> Path:
        arquivo = self._preparar(f"{_nome_base(relatorios)}.csv")
        self.tabela_fluxos(relatorios).to_csv(arquivo, index=False, float_format="%.2f")
        return arquivo

    def exportar_json(self, relatorios: Sequence[RunReport]) -> Path:
        arquivo = self._preparar(f"{_nome_base(relatorios)}.json")
        dados = [asdict(r) for r in relatorios]
        with open(arquivo, 'w', encoding='utf-8') as f:
            json.dump(dados, f, indent=2, ensure_ascii=False)
            f.write("\n")
        return arquivo

    def exportar_agregado(self, agregado: Sequence[Any], nome: str, formato: str) -> Path:
        linhas = [asdict(a) for a in agregado]
        if formato == 'json':
            arquivo = self._preparar(f"{nome}_agregado.json")
            with open(arquivo, 'w', encoding='utf-8') as f:
                json.dump(linhas, f, indent=2, ensure_ascii=False)
                f.write("\n")
        else:
            arquivo = self._preparar(f"{nome}_agregado.csv")
            pd.DataFrame(linhas).to_csv(arquivo, index=False, float_format="%.4f")
        return arquivo

    def exportar_varredura(self, tabela: pd.DataFrame, nome: str, formato: str) -> Path:
        if formato == 'json':
            arquivo = self._preparar(f"{nome}_sweep.json")
            tabela.to_json(arquivo, orient='records', indent=2)
        else:
            arquivo = self._preparar(f"{nome}_sweep.csv")
            tabela.to_csv(arquivo, index=False, float_format="%.2f")
        return arquivo


def emit(relatorios: Sequence[RunReport], formato: str, destino: Path) -> Path:
    """
    Grava os relatórios em destino.

    Raises:
        ValueError: formato desconhecido ou lista vazia
        OSError: destino sem permissão de escrita
    """
    if formato not in FORMATOS:
        raise ValueError(f"formato deve ser csv ou json (atual: {formato})")
    if not relatorios:
        raise ValueError("nenhum relatório para exportar")
    sistema = SistemaExportacao(destino)
    arquivo = sistema.exportar_csv(relatorios) if formato == 'csv' else sistema.exportar_json(relatorios)
    logger.info("%d relatório(s) gravado(s) em %s", len(relatorios), arquivo)
    return arquivo


__all__ = ['FORMATOS', 'COLUNAS_CSV', 'SistemaExportacao', 'emit']
