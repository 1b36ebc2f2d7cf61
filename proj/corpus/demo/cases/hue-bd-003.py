import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def recall_scene(scene_id):
    url = f'{BASE}/resource/scene/{scene_id}'
    resp = requests.put(url, headers=HEADERS, data={'recall': {'action': 'active'}})
    return resp.json()
