"""
Execução de Experimentos - EdcaSim

run_scenario: uma instância determinística (cenário, semente) -> RunReport
run_replications: reps instâncias com sementes seed+0..seed+reps-1,
                  opcionalmente em paralelo, mais o agregado por classe
run_sweep: uma linha por valor do parâmetro varrido, com o resto fixo
"""

import logging
import multiprocessing
from dataclasses import dataclass
from typing import List, Optional, TextIO, Tuple

import pandas as pd
from tqdm import tqdm

from src.core.cenarios import ScenarioConfig, SweepSpec, aplicar_parametro
from src.core.metricas_confianca import resumir
from src.core.simulacao import Simulacao
from src.validacao.metricas import ORDEM_CLASSES, RunReport, summarize

logger = logging.getLogger(__name__)


@dataclass
class AgregadoClasse:
    """Estatística entre replicações do atraso médio de uma classe."""
    traffic_class: str
    window: int
    reps: int
    mean_of_means_ms: Optional[float]
    desvio_ms: float
    cv: float
    ic95_inferior_ms: Optional[float]
    ic95_superior_ms: Optional[float]
    consistencia: str


@dataclass
class ResultadoReplicacoes:
    scenario: str
    seed: int
    relatorios: List[RunReport]
    agregado: List[AgregadoClasse]

    def classe(self, traffic_class: str, window: int = 0) -> Optional[AgregadoClasse]:
        for a in self.agregado:
            if a.traffic_class == traffic_class and a.window == window:
                return a
        return None


def run_scenario(
    config: ScenarioConfig,
    seed: Optional[int] = None,
    rep: int = 0,
    trace: Optional[TextIO] = None,
    warmup_s: Optional[float] = None,
    segmentar: bool = True,
) -> RunReport:
    """Executa uma instância até duration_s e resume as métricas."""
    sim = Simulacao(config, seed=seed, rep=rep, trace=trace, warmup_s=warmup_s)
    return summarize(sim.executar(), segmentar=segmentar)


def _executar_tarefa(tarefa: Tuple[ScenarioConfig, int, int, Optional[float], bool]) -> RunReport:
    config, seed, rep, warmup_s, segmentar = tarefa
    return run_scenario(config, seed=seed, rep=rep, warmup_s=warmup_s, segmentar=segmentar)


def agregar(relatorios: List[RunReport]) -> List[AgregadoClasse]:
    """Média das médias, CV e IC 95% por (classe, janela)."""
    chaves = sorted(
        {(c.traffic_class, c.window) for r in relatorios for c in r.classes},
        key=lambda k: (k[1], ORDEM_CLASSES.index(k[0])),
    )
    agregado = []
    for classe, janela in chaves:
        medias = [m for m in (r.mean_ms(classe, janela) for r in relatorios) if m is not None]
        if not medias:
            agregado.append(AgregadoClasse(classe, janela, 0, None, 0.0, 0.0, None, None, 'INSUFICIENTE'))
            continue
        r = resumir(medias)
        agregado.append(AgregadoClasse(
            traffic_class=classe,
            window=janela,
            reps=r.n,
            mean_of_means_ms=r.media,
            desvio_ms=r.desvio,
            cv=r.cv,
            ic95_inferior_ms=r.inferior,
            ic95_superior_ms=r.superior,
            consistencia=r.consistencia,
        ))
    return agregado


def run_replications(
    config: ScenarioConfig,
    seed: Optional[int] = None,
    reps: Optional[int] = None,
    workers: int = 1,
    warmup_s: Optional[float] = None,
    segmentar: bool = True,
    progresso: bool = False,
    trace: Optional[TextIO] = None,
) -> ResultadoReplicacoes:
    """
    Executa reps instâncias independentes (sementes seed+i).
    A ordem dos relatórios é sempre a do índice da replicação.
    Com trace, tudo roda neste processo e só a replicação 0 é rastreada.
    """
    seed = config.seed if seed is None else seed
    reps = config.reps if reps is None else reps
    if reps < 1:
        raise ValueError(f"reps deve ser >= 1 (atual: {reps})")
    tarefas = [(config, seed + i, i, warmup_s, segmentar) for i in range(reps)]
    barra = dict(total=reps, desc=f"🔁 {config.name}", unit="rep", ncols=100, disable=not progresso)

    if trace is not None:
        relatorios = [
            run_scenario(cfg, seed=s, rep=i, trace=trace if i == 0 else None, warmup_s=w, segmentar=seg)
            for cfg, s, i, w, seg in tqdm(tarefas, **barra)
        ]
    elif workers > 1 and reps > 1:
        relatorios = []
        pool = multiprocessing.Pool(processes=min(workers, reps))
        try:
            for relatorio in tqdm(pool.imap_unordered(_executar_tarefa, tarefas), **barra):
                relatorios.append(relatorio)
        finally:
            pool.close()
            pool.join()
        relatorios.sort(key=lambda r: r.rep)
    else:
        relatorios = [_executar_tarefa(t) for t in tqdm(tarefas, **barra)]

    logger.info("%s: %d replicações concluídas (seed base %d)", config.name, reps, seed)
    return ResultadoReplicacoes(scenario=config.name, seed=seed, relatorios=relatorios, agregado=agregar(relatorios))


def run_sweep(
    sweep: SweepSpec,
    seed: Optional[int] = None,
    reps: int = 1,
    workers: int = 1,
    warmup_s: Optional[float] = None,
    progresso: bool = False,
) -> pd.DataFrame:
    """
    Tabela com uma linha por valor: atraso médio por classe (ms, média das
    replicações) e quadros por acesso da AC alvo. Mesma política de sementes
    em todas as linhas.
    """
    seed = sweep.base.seed if seed is None else seed
    station_id, ac = sweep.target
    linhas = []
    for valor in tqdm(sweep.values, desc=f"🎚️  {sweep.parameter}", unit="valor", ncols=100, disable=not progresso):
        config = aplicar_parametro(sweep.base, sweep.parameter, sweep.target, valor)
        resultado = run_replications(config, seed=seed, reps=reps, workers=workers, warmup_s=warmup_s, segmentar=False)
        linha = {'parameter': sweep.parameter, 'value': valor}
        for a in resultado.agregado:
            linha[f"{a.traffic_class}_ms"] = a.mean_of_means_ms
        quadros = [r.channel.quadros_por_acesso.get(ac.name) for r in resultado.relatorios]
        quadros = [q for q in quadros if q is not None]
        linha[f"frames_per_access_{ac.name}"] = sum(quadros) / len(quadros) if quadros else None
        linhas.append(linha)
    return pd.DataFrame(linhas)


__all__ = [
    'AgregadoClasse',
    'ResultadoReplicacoes',
    'run_scenario',
    'agregar',
    'run_replications',
    'run_sweep',
]
